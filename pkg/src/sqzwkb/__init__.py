"""Photon statistics of squeezed number states: exact, WKB interference and Wigner-ring routes."""

__version__ = "0.1.0"

from .cohen import cohen_closed_form, cohen_distribution, ring_area, wigner_ring_distribution
from .compare import ComparisonReport, compare, last_maximum
from .compute import compute_distribution, default_m_max
from .distribution import Distribution, Method
from .exact import (exact_amplitude, exact_amplitude_recurrence, exact_amplitudes,
                    exact_distribution, recurrence_column)
from .interference import (OverlapGeometry, crossing_point, interference_phases, overlap_area,
                           overlap_geometry, wkb_amplitude, wkb_distribution)
from .states import SqueezedNumberState, psi_momentum, psi_position, wigner
from .wkb import (WkbState, action, classical_momentum, normalization_correction,
                  wkb_wavefunction)
