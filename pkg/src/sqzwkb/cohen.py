"""Photon statistics from the Wigner function integrated over Fock rings.

Ring integral
    In elliptic coordinates x = e^{-r} t cos(phi), p = e^{r} t sin(phi) the
    Wigner function of |n, r> depends on t alone and dx dp = t dt dphi. The
    radial integral has the closed antiderivative

        K_n(v) = 1 - exp(-v) [(-1)^n L_n(2v) + 2 sum_{j<n} (-1)^j L_j(2v)]

    (K_n(0) = 0, K_n(inf) = 1), so half the Wigner mass inside the annulus
    sqrt(2m) <= sqrt(x^2 + p^2) <= sqrt(2m + 2) is

        (1/pi) * integral_0^{pi/2} [K_n(v_out(phi)) - K_n(v_in(phi))] dphi,
        v(phi) = R^2 / (e^{-2r} cos^2 phi + e^{2r} sin^2 phi).

High-squeezing closed form
    Replacing the ring integral by the momentum marginal over one radial
    window and applying the parity factor gives

        P_mn ~ (1 + cos((m-n) pi))^2 (sqrt(2m+2) - sqrt(2m)) e^{-r} h_n(sqrt(2m+1) e^{-r})^2.
"""

import math

import numpy as np

from .distribution import Distribution, Method
from .special_fn import hermite_function, integrate_adaptive
from .states import PHASE_SPACE_KERNEL, SqueezedNumberState, psi_momentum

RING_TOLERANCE = 1e-10
REGIME_R = 1.0

_RESCALE_AT = 1e150


def _ring_antiderivative(n, v):
    """K_n(v) for an array of v >= 0."""
    v = np.asarray(v, dtype=float)
    y = 2.0 * v
    logscale = -v
    prev = np.zeros_like(v)
    cur = np.ones_like(v)
    acc = np.full_like(v, 2.0 if n > 0 else 1.0)
    for j in range(n):
        prev, cur = cur, ((2 * j + 1 - y) * cur - j * prev) / (j + 1)
        coeff = (1.0 if j + 1 == n else 2.0) * (-1.0 if (j + 1) % 2 else 1.0)
        acc = acc + coeff * cur
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            cur = np.where(big, cur / _RESCALE_AT, cur)
            prev = np.where(big, prev / _RESCALE_AT, prev)
            acc = np.where(big, acc / _RESCALE_AT, acc)
            logscale = np.where(big, logscale + math.log(_RESCALE_AT), logscale)
    return 1.0 - acc * np.exp(logscale)


def _disk_profile(n, r, radius_sq):
    c_out = math.exp(-2 * r)
    c_in = math.exp(2 * r)

    def k_of(phi):
        cos2 = np.cos(phi) ** 2
        q = c_out * cos2 + c_in * (1.0 - cos2)
        return _ring_antiderivative(n, radius_sq / q)

    return k_of


def ring_area(m, n, r, tol=RING_TOLERANCE):
    """Half the Wigner mass of |n, r> inside the m-th Fock annulus."""
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    outer = _disk_profile(n, r, 2.0 * m + 2.0)
    inner = _disk_profile(n, r, 2.0 * m)

    def integrand(phi):
        return outer(phi) - inner(phi)

    return integrate_adaptive(integrand, 0.0, 0.5 * math.pi, tol=tol) / math.pi


def momentum_window_area(m, n, r, tol=1e-12):
    """Momentum marginal |psibar(p)|^2 integrated over sqrt(2m) <= p <= sqrt(2m+2)."""
    state = SqueezedNumberState(n, r)

    def density(p):
        return psi_momentum(state, p) ** 2

    return integrate_adaptive(density, math.sqrt(2.0 * m), math.sqrt(2.0 * m + 2.0), tol=tol)


def _radial_step(m):
    m = np.asarray(m, dtype=float)
    # sqrt(2m+2) - sqrt(2m) without cancellation
    return 2.0 / (np.sqrt(2 * m + 2) + np.sqrt(2 * m))


def cohen_closed_form(m, n, r):
    """High-squeezing approximation to P_mn; exactly 0 for odd m - n."""
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    if (m - n) % 2:
        return 0.0
    y = math.sqrt(2 * m + 1) * math.exp(-r)
    return float(4.0 * _radial_step(m) * math.exp(-r) * hermite_function(n, y) ** 2)


def _regime_metadata(r):
    meta = {"kernel": PHASE_SPACE_KERNEL}
    if r < REGIME_R:
        meta["warning"] = (f"r = {r:g} is below the high-squeezing regime (r >= {REGIME_R:g}) "
                           "assumed by the ring approximation")
    return meta


def cohen_distribution(n, r, m_max):
    """Closed-form high-squeezing distribution for m = 0..m_max."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    m = np.arange(m_max + 1)
    y = np.sqrt(2 * m + 1) * math.exp(-r)
    values = 4.0 * _radial_step(m) * math.exp(-r) * hermite_function(n, y) ** 2
    values = np.atleast_1d(values)
    values[(m - n) % 2 == 1] = 0.0
    return Distribution(n=n, r=r, method=Method.COHEN_CLOSED_FORM, values=values,
                        metadata=_regime_metadata(r))


def wigner_ring_distribution(n, r, m_max, tol=RING_TOLERANCE):
    """(1 + cos((m-n) pi))^2 times the numerically integrated ring area."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    areas = np.array([ring_area(m, n, r, tol=tol) for m in range(m_max + 1)])
    allowed = (np.arange(m_max + 1) - n) % 2 == 0
    values = np.where(allowed, 4.0 * areas, 0.0)
    meta = _regime_metadata(r)
    meta["ring_tolerance"] = tol
    meta["ring_mass"] = float(2.0 * areas.sum())
    meta["ring_mass_discarded_by_parity"] = float(2.0 * areas[~allowed].sum())
    return Distribution(n=n, r=r, method=Method.WIGNER_RING, values=values, metadata=meta)
