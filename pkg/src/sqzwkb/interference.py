"""Photon statistics of squeezed number states from phase-space interference.

The Fock ring of |m> (radii sqrt(2m), sqrt(2m+2)) and the squeezed ring of
|n, r> cross at four points (+-X_c, +-p_c). Stationary-phase evaluation of
the WKB overlap integral gives one term sqrt(A) e^{+-i phi} per crossing,
and the reflection property of the action collapses the sum to

    W_mn = 2 sqrt(A_mn) cos(phi_mn) (1 + cos((m - n) pi)).
"""

import math
from dataclasses import dataclass

import numpy as np

from .distribution import FLAG_NONE, FLAG_TANGENCY, Distribution, Method
from .errors import DegenerateSqueezingError, NoCrossingError, TangencyError
from .wkb import WkbState, action, classical_momentum, momentum_slope

TANGENCY_THRESHOLD = 1e-9
# relative slack for deciding that a crossing sits exactly on a band edge
EDGE_RTOL = 1e-12


def crossing_window(n, r):
    """Real bounds (m_lo, m_hi) of Fock numbers whose ring meets the squeezed ring."""
    lo = 0.5 * ((2 * n + 1) * math.exp(-2 * abs(r)) - 1)
    hi = 0.5 * ((2 * n + 1) * math.exp(2 * abs(r)) - 1)
    return lo, hi


def _check(m, n, r):
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    if r == 0:
        raise DegenerateSqueezingError("r = 0: rings coincide or are disjoint")
    if r < 0:
        raise ValueError("crossing geometry is set up for r > 0")


def crossing_point(m, n, r):
    """X_c where the momenta of |m> and |n, r> coincide."""
    _check(m, n, r)
    e2, e4 = math.exp(2 * r), math.exp(4 * r)
    num = e2 * (2 * n + 1) - (2 * m + 1)
    lower = (2 * n + 1) / e2 - (2 * m + 1)
    if abs(num) <= EDGE_RTOL * e2 * (2 * n + 1):
        num = 0.0
    if abs(lower) <= EDGE_RTOL * (2 * m + 1):
        lower = 0.0
    if num < 0 or lower > 0:
        raise NoCrossingError(f"rings of m={m} and (n={n}, r={r}) do not intersect")
    return math.sqrt(num / (e4 - 1.0))


def _edge_case(m, n, r, x_c):
    eps_m = WkbState(m, 0.0).epsilon
    eps_n = WkbState(n, r).epsilon
    edge = (1.0 - EDGE_RTOL) * min(eps_m, eps_n)
    return x_c == 0.0 or x_c >= edge


def overlap_area(m, n, r):
    """A_mn = 2 pi / (T_m T_n^(r) p^2(X_c) |p_m'(X_c) - p_n^(r)'(X_c)|)."""
    x_c = crossing_point(m, n, r)
    fock, sq = WkbState(m, 0.0), WkbState(n, r)
    if _edge_case(m, n, r, x_c):
        raise TangencyError(f"bands touch at X_c={x_c:.6g} (m={m}, n={n}, r={r})")
    slope_gap = abs(momentum_slope(fock, x_c) - momentum_slope(sq, x_c))
    if not slope_gap >= TANGENCY_THRESHOLD:
        raise TangencyError(f"slope difference {slope_gap:.3g} below threshold at m={m}")
    p = classical_momentum(fock, x_c)
    return 2.0 * math.pi / (fock.period * sq.period * p * p * slope_gap)


def interference_phases(m, n, r):
    """(phi, phi') at +X_c and -X_c."""
    x_c = crossing_point(m, n, r)
    fock, sq = WkbState(m, 0.0), WkbState(n, r)
    x_c = min(x_c, fock.epsilon, sq.epsilon)
    quarter = 0.25 * math.pi
    phi = action(fock, x_c) - action(sq, x_c) - quarter
    phi_prime = action(fock, -x_c) - action(sq, -x_c) + quarter
    return phi, phi_prime


@dataclass(frozen=True)
class OverlapGeometry:
    m: int
    n: int
    r: float
    x_c: float
    area: float
    phi: float
    phi_prime: float
    allowed: bool
    flag: str = FLAG_NONE


def overlap_geometry(m, n, r):
    """Everything the interference picture needs for one (m, n, r)."""
    try:
        x_c = crossing_point(m, n, r)
    except NoCrossingError:
        nan = math.nan
        return OverlapGeometry(m, n, r, nan, nan, nan, nan, allowed=False)
    phi, phi_prime = interference_phases(m, n, r)
    try:
        area = overlap_area(m, n, r)
        flag = FLAG_NONE
    except TangencyError:
        area, flag = math.inf, FLAG_TANGENCY
    return OverlapGeometry(m, n, r, x_c, area, phi, phi_prime, allowed=True, flag=flag)


def wkb_amplitude(m, n, r):
    """Interference amplitude; 0 for odd m - n or outside the crossing window.

    Returns NaN when the bands are tangent, where the area diverges.
    """
    _check(m, n, r)
    if (m - n) % 2:
        return 0.0
    g = overlap_geometry(m, n, r)
    if not g.allowed:
        return 0.0
    if g.flag == FLAG_TANGENCY:
        return math.nan
    # 1 + cos((m - n) pi) evaluated on the integer parity
    return 4.0 * math.sqrt(g.area) * math.cos(g.phi)


def wkb_distribution(n, r, m_max):
    """P_m = W_mn^2 from the interference formula for m = 0..m_max.

    Probabilities do not depend on the sign of r, so r < 0 is evaluated at
    |r|. Tangent entries carry NaN and the tangency flag.
    """
    if r == 0:
        raise DegenerateSqueezingError("WKB interference needs r != 0")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    r_eff = abs(r)
    values = np.zeros(m_max + 1)
    flags = [FLAG_NONE] * (m_max + 1)
    for m in range(m_max + 1):
        w = wkb_amplitude(m, n, r_eff)
        if math.isnan(w):
            values[m] = math.nan
            flags[m] = FLAG_TANGENCY
        else:
            values[m] = w * w
    lo, hi = crossing_window(n, r_eff)
    meta = {
        "kernel": None,
        "crossing_window": [lo, hi],
        "tangency_threshold": TANGENCY_THRESHOLD,
    }
    if r < 0:
        meta["note"] = "evaluated at |r|; photon statistics are invariant under r -> -r"
    return Distribution(n=n, r=r, method=Method.WKB, values=values, flags=flags, metadata=meta)
