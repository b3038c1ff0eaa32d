"""Exact wavefunctions and Wigner function of squeezed number states.

The squeeze operator with zero phase acts on position wavefunctions as the
dilation x -> e^r x (with the Jacobian factor e^(r/2)), so

    psi_n^(r)(x)    = e^(r/2)  h_n(e^r x)
    psibar_n^(r)(p) = e^(-r/2) h_n(e^-r p)     (global phase dropped)

and the Wigner function is the Fock-state Wigner function evaluated at the
rescaled point (e^r x, e^-r p).
"""

import math
from dataclasses import dataclass

import numpy as np

from .special_fn import hermite_function, laguerre_function

# Member of the Cohen class used for every phase-space computation.
PHASE_SPACE_KERNEL = "wigner"


@dataclass(frozen=True)
class SqueezedNumberState:
    """The state S(r)|n> with real squeezing parameter r."""

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
    def parity(self):
        return -1 if self.n % 2 else 1


def psi_position(state, x):
    """Position-space wavefunction; real because the squeezing phase is zero."""
    r = state.r
    if r == 0.0:
        return hermite_function(state.n, x)
    return math.exp(0.5 * r) * hermite_function(state.n, math.exp(r) * np.asarray(x, dtype=float))


def psi_momentum(state, p):
    """Momentum-space wavefunction up to a global phase (only |.|^2 is used)."""
    r = state.r
    if r == 0.0:
        return hermite_function(state.n, p)
    return math.exp(-0.5 * r) * hermite_function(state.n, math.exp(-r) * np.asarray(p, dtype=float))


def wigner(state, x, p):
    """Wigner function ((-1)^n / pi) exp(-u) L_n(2u), u = e^{2r} x^2 + e^{-2r} p^2."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    u = math.exp(2 * state.r) * x * x + math.exp(-2 * state.r) * p * p
    return state.parity / math.pi * laguerre_function(state.n, 2.0 * u)


def phase_space_extent(state, cutoff=60.0):
    """Half-widths (X, P) outside which the Wigner function is below ~exp(-cutoff)."""
    u_max = 2.0 * state.n + 1.0 + cutoff
    root = math.sqrt(u_max)
    return math.exp(-state.r) * root, math.exp(state.r) * root
