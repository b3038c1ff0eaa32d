"""Semiclassical (WKB) description of squeezed number states.

The squeezed state |n, r> is the n-th eigenstate of
H' = p^2 e^{-2r} / 2 + x^2 e^{2r} / 2, so its classical orbit at energy
n + 1/2 is an ellipse with turning point epsilon = e^{-r} sqrt(2n + 1).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ForbiddenRegionError, TurningPointError
from .special_fn import integrate_adaptive

DEFAULT_GUARD = 1e-3


@dataclass(frozen=True)
class WkbState:
    n: int
    r: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        if not math.isfinite(self.r):
            raise ValueError("r must be finite")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r", float(self.r))

    @property
    def epsilon(self):
        """Classical turning point e^{-r} sqrt(2n + 1)."""
        return math.exp(-self.r) * math.sqrt(2 * self.n + 1)

    @property
    def period(self):
        """Closed-orbit integral of dx / p, i.e. 2 pi e^{-2r}."""
        return 2.0 * math.pi * math.exp(-2.0 * self.r)

    @property
    def energy(self):
        return self.n + 0.5


def _check_allowed(s, x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > s.epsilon):
        raise ForbiddenRegionError(
            f"|x| exceeds the turning point {s.epsilon:.6g} for n={s.n}, r={s.r}")
    return x


def _ret(a):
    return float(a) if np.ndim(a) == 0 else a


def classical_momentum(s, x):
    """p(x) = e^{2r} sqrt(epsilon^2 - x^2) on the allowed interval."""
    x = _check_allowed(s, x)
    eps = s.epsilon
    return _ret(math.exp(2 * s.r) * np.sqrt((eps - x) * (eps + x)))


def momentum_slope(s, x):
    """dp/dx; diverges at the turning points."""
    x = _check_allowed(s, x)
    eps = s.epsilon
    with np.errstate(divide="ignore"):
        return _ret(-math.exp(2 * s.r) * x / np.sqrt((eps - x) * (eps + x)))


def action(s, x):
    """Phase function S(x) = integral of p from x to the turning point.

    Closed form from the circular-segment area of the unsqueezed orbit,
    rescaled: S(x) = e^{2r} [eps^2 arccos(x/eps) - x sqrt(eps^2 - x^2)] / 2.
    """
    x = _check_allowed(s, x)
    eps = s.epsilon
    ratio = np.clip(x / eps, -1.0, 1.0)
    seg = 0.5 * eps * eps * np.arccos(ratio) - 0.5 * x * np.sqrt((eps - x) * (eps + x))
    return _ret(math.exp(2 * s.r) * seg)


def action_by_quadrature(s, x, tol=1e-12):
    """S(x) by direct adaptive integration of the classical momentum."""
    x = float(_check_allowed(s, x))
    if x == s.epsilon:
        return 0.0
    return integrate_adaptive(lambda t: classical_momentum(s, t), x, s.epsilon, tol=tol)


def wkb_wavefunction(s, x, guard=DEFAULT_GUARD, normalize=False):
    """Phi(x) = (2 / C) (T p(x))^{-1/2} cos(S(x) - pi/4) inside the allowed region.

    ``guard`` is the relative width of the excluded band next to each turning
    point. With ``normalize=False`` the leading-order constant C = 1 is used;
    ``normalize=True`` divides by the numerically computed |C|.
    """
    x = np.asarray(x, dtype=float)
    limit = s.epsilon * (1.0 - guard)
    if np.any(np.abs(x) >= limit):
        raise TurningPointError(
            f"WKB wavefunction undefined within {guard:g} of the turning point "
            f"(|x| must stay below {limit:.6g})")
    p = classical_momentum(s, x)
    phi = 2.0 * np.cos(action(s, x) - 0.25 * math.pi) / np.sqrt(s.period * p)
    if normalize:
        phi = phi / math.sqrt(normalization_correction(s))
    return _ret(phi)


def normalization_correction(s, as_printed=False, tol=1e-13):
    """|C_n|^2 = 1 + (2/T) * integral over (-eps, eps) of sin(2S)/p dx.

    With x = eps cos(t) the endpoint singularity disappears and the result
    1 + (1/pi) * integral_0^pi sin(2 S(eps cos t)) dt is independent of r.
    ``as_printed=True`` uses a bare 1/pi prefactor in front of the x
    integral, which differs from the consistent value by a factor e^{-2r}
    on the correction term.
    """
    eps = s.epsilon

    def integrand(t):
        return np.sin(2.0 * action(s, eps * np.cos(t)))

    corr = integrate_adaptive(integrand, 0.0, math.pi, tol=tol) / math.pi
    if as_printed:
        corr *= math.exp(-2.0 * s.r)
    return 1.0 + corr
