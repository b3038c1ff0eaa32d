"""Single entry point mapping a method to the function that computes it."""

import math

from .cohen import cohen_distribution, wigner_ring_distribution
from .distribution import Method
from .exact import exact_distribution
from .interference import wkb_distribution

CLI_NAMES = {
    "exact": Method.EXACT_QUADRATURE,
    "exact-recurrence": Method.EXACT_RECURRENCE,
    "wkb": Method.WKB,
    "cohen": Method.COHEN_CLOSED_FORM,
    "wigner-ring": Method.WIGNER_RING,
}


def default_m_max(n, r):
    """Classical support of the squeezed ring plus a 50-photon margin."""
    return math.ceil((2 * n + 1) * math.exp(2 * abs(r)) / 2) + 50


def compute_distribution(method, n, r, m_max=None):
    method = CLI_NAMES.get(method, method)
    method = Method(method)
    if m_max is None:
        m_max = default_m_max(n, r)
    if method.is_exact:
        return exact_distribution(n, r, m_max, method=method)
    if method is Method.WKB:
        return wkb_distribution(n, r, m_max)
    if method is Method.COHEN_CLOSED_FORM:
        return cohen_distribution(n, r, m_max)
    return wigner_ring_distribution(n, r, m_max)
