"""Overflow-safe orthogonal-polynomial and quadrature primitives.

Hermite functions are evaluated in normalized form,

    h_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2),

through the three-term recurrence on h_n itself. The Gaussian factor is
carried as a separate logarithmic scale so that neither the polynomial part
nor the exponential over- or underflows before the final product.
"""

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ConvergenceError

PI_M14 = math.pi ** -0.25

MAX_GH_ORDER = 4000

# long double is wider than float64 on x86-64 Linux, identical on some platforms
EXTENDED_AVAILABLE = np.finfo(np.longdouble).eps < np.finfo(np.float64).eps

_RESCALE_AT = 1e150
_RESCALE_LOG = 150.0 * math.log(10.0)


def _working_dtype(x):
    """float64, or longdouble when the input already carries it."""
    return np.longdouble if np.asarray(x).dtype == np.longdouble else np.float64


def _hermite_mantissas(n, x):
    """Run the normalized recurrence up to order n.

    Returns (h_n, h_{n-1}, logscale) with the true values equal to
    mantissa * exp(logscale). Arithmetic runs in long double when ``x`` is
    a long double array, including the recurrence coefficients.
    """
    dt = _working_dtype(x)
    x = np.asarray(x, dtype=dt)
    logscale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, _pi_m14(dt))
    two, rescale, rescale_log = dt(2), dt(_RESCALE_AT), dt(_RESCALE_LOG)
    for k in range(n):
        nxt = x * np.sqrt(two / (k + 1)) * cur - np.sqrt(dt(k) / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > rescale
        if big.any():
            cur = np.where(big, cur / rescale, cur)
            prev = np.where(big, prev / rescale, prev)
            logscale = np.where(big, logscale + rescale_log, logscale)
    return cur, prev, logscale


def _pi_m14(dt):
    if dt is np.float64:
        return PI_M14
    # pi to long double accuracy from arctan rather than the rounded float
    return (4 * np.arctan(dt(1))) ** dt(-0.25)


def hermite_function(n, x):
    """Normalized Hermite function h_n(x); scalar or array ``x`` (long double arrays stay long double)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cur, _, logscale = _hermite_mantissas(n, x)
    out = cur * np.exp(logscale)
    return float(out) if np.ndim(out) == 0 else out


def hermite_function_table(nmax, x):
    """All h_0..h_nmax at the points ``x``; shape (nmax + 1,) + x.shape."""
    dt = _working_dtype(x)
    x = np.asarray(x, dtype=dt)
    out = np.empty((nmax + 1,) + x.shape, dtype=dt)
    logscale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, _pi_m14(dt))
    out[0] = cur * np.exp(logscale)
    two, rescale, rescale_log = dt(2), dt(_RESCALE_AT), dt(_RESCALE_LOG)
    for k in range(nmax):
        nxt = x * np.sqrt(two / (k + 1)) * cur - np.sqrt(dt(k) / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > rescale
        if big.any():
            cur = np.where(big, cur / rescale, cur)
            prev = np.where(big, prev / rescale, prev)
            logscale = np.where(big, logscale + rescale_log, logscale)
        out[k + 1] = cur * np.exp(logscale)
    return out


def laguerre(n, x):
    """Laguerre polynomial L_n(x) by the standard three-term recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return float(cur) if cur.ndim == 0 else cur


def laguerre_function(n, y):
    """exp(-y/2) * L_n(y), evaluated without intermediate overflow."""
    y = np.asarray(y, dtype=float)
    logscale = -0.5 * y
    prev = np.zeros_like(y)
    cur = np.ones_like(y)
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 - y) * cur - k * prev) / (k + 1)
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            cur = np.where(big, cur / _RESCALE_AT, cur)
            prev = np.where(big, prev / _RESCALE_AT, prev)
            logscale = np.where(big, logscale + _RESCALE_LOG, logscale)
    out = cur * np.exp(logscale)
    return float(out) if out.ndim == 0 else out


class RuleKind(str, Enum):
    GAUSS_HERMITE = "gauss_hermite"
    ADAPTIVE_INTERVAL = "adaptive_interval"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a quadrature rule.

    For Gauss-Hermite rules ``weights`` integrate against exp(-x^2) and
    underflow to zero at the outermost nodes of high orders;
    ``scaled_weights`` = weights * exp(x^2) stay representable and are what
    integrands carrying their own Gaussian factor should use.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray
    kind: RuleKind = RuleKind.GAUSS_HERMITE

    @property
    def order(self):
        return len(self.nodes)


@lru_cache(maxsize=64)
def gauss_hermite_rule(order, tol=None, max_iter=50, extended=False):
    """Gauss-Hermite rule of the given order (weight exp(-x^2)).

    Initial nodes are the eigenvalues of the Jacobi matrix; each node is
    then polished by Newton iteration on h_order until the relative
    correction falls below ``tol`` (default: a few units of the working
    precision). Weights come from the Christoffel formula
    w_i = exp(-x_i^2) / (order * h_{order-1}(x_i)^2). With ``extended`` the
    rule is computed and stored in long double.
    """
    if not 1 <= order <= MAX_GH_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_GH_ORDER}], got {order}")
    dt = np.longdouble if extended else np.float64
    if tol is None:
        tol = 16 * np.finfo(dt).eps
    if order == 1:
        arr = np.array([0.0], dtype=dt)
        w = np.sqrt(4 * np.arctan(np.array([1.0], dtype=dt)))
        return _freeze_rule(arr, w, w.copy())

    k = np.arange(1, order)
    x = eigvalsh_tridiagonal(np.zeros(order), np.sqrt(k / 2.0)).astype(dt)
    root2n = np.sqrt(dt(2 * order))
    for _ in range(max_iter):
        hn, hnm1, _ = _hermite_mantissas(order, x)
        # the common log scale cancels in the Newton ratio
        dx = hn / (root2n * hnm1 - x * hn)
        x = x - dx
        if np.max(np.abs(dx) / np.maximum(1.0, np.abs(x))) < tol:
            break
    else:
        raise ConvergenceError(f"Gauss-Hermite Newton iteration stalled at order {order}")

    x = 0.5 * (x - x[::-1])
    _, hnm1, logscale = _hermite_mantissas(order, x)
    scaled = np.exp(-2 * logscale) / (order * hnm1 * hnm1)
    scaled = 0.5 * (scaled + scaled[::-1])
    weights = np.exp(-x * x) * scaled
    return _freeze_rule(x, weights, scaled)


def _freeze_rule(nodes, weights, scaled):
    for a in (nodes, weights, scaled):
        a.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, scaled_weights=scaled)


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_KX = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss points sit at odd positions of the Kronrod ladder
_GIDX = np.array([1, 3, 5, 7, 9, 11, 13])
_GW = np.concatenate([_WG[:-1], _WG[::-1]])


def _eval(f, x):
    try:
        y = np.asarray(f(x), dtype=float)
    except TypeError:
        y = None
    if y is None or y.shape != x.shape:
        y = np.array([float(f(v)) for v in x])
    return y


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = _eval(f, mid + half * _KX)
    k = half * np.dot(_KW, y)
    g = half * np.dot(_GW, y[_GIDX])
    return k, abs(k - g)


def integrate_adaptive(f, a, b, tol=1e-10, max_intervals=100_000, full_output=False):
    """Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].

    ``f`` should accept a numpy array and return values of the same shape;
    scalar-only callables are tolerated. The interval with the largest error
    estimate is bisected until the summed estimate drops below ``tol``.
    Raises ConvergenceError when the interval budget is exhausted.
    """
    if not a < b:
        raise ValueError("need a < b")
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total_err = err
    while total_err > tol:
        if len(heap) >= max_intervals:
            raise ConvergenceError(
                f"adaptive integration exhausted {max_intervals} intervals",
                achieved_error=total_err,
            )
        neg_err, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval at floating-point resolution; accept what we have
            heapq.heappush(heap, (neg_err, lo, hi, _))
            break
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total_err += e1 + e2 + neg_err
    value = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    if total_err > tol:
        raise ConvergenceError("adaptive integration hit floating-point resolution",
                               achieved_error=total_err)
    if full_output:
        return value, total_err
    return value


# Multiprecision counterparts, used to re-evaluate quadrature sums whose
# terms cancel beyond what the hardware precision can resolve.

MP_DPS = 34


def hermite_function_table_mp(nmax, xs):
    """Rows h_0..h_nmax at the mpmath points ``xs`` (lists of mpf, current precision)."""
    prev = [mp.mpf(0)] * len(xs)
    cur = [mp.pi ** mp.mpf(-0.25) * mp.exp(-x * x / 2) for x in xs]
    rows = [cur]
    for k in range(nmax):
        a = mp.sqrt(mp.mpf(2) / (k + 1))
        b = mp.sqrt(mp.mpf(k) / (k + 1))
        prev, cur = cur, [a * x * c - b * p for x, c, p in zip(xs, cur, prev)]
        rows.append(cur)
    return rows


def _last_two_mp(n, xs):
    prev = [mp.mpf(0)] * len(xs)
    cur = [mp.pi ** mp.mpf(-0.25) * mp.exp(-x * x / 2) for x in xs]
    for k in range(n):
        a = mp.sqrt(mp.mpf(2) / (k + 1))
        b = mp.sqrt(mp.mpf(k) / (k + 1))
        prev, cur = cur, [a * x * c - b * p for x, c, p in zip(xs, cur, prev)]
    return cur, prev


@lru_cache(maxsize=16)
def gauss_hermite_half_rule_mp(order, dps=MP_DPS):
    """Positive nodes and scaled weights of the even-order rule at ``dps`` digits.

    The hardware rule supplies starting values; three Newton steps in
    multiprecision take them well past ``dps`` digits.
    """
    if order % 2 or not 2 <= order <= MAX_GH_ORDER:
        raise ValueError(f"need an even order in [2, {MAX_GH_ORDER}], got {order}")
    start = gauss_hermite_rule(order, extended=EXTENDED_AVAILABLE).nodes
    with mp.workdps(dps):
        xs = [mp.mpf(float(x)) for x in start[order // 2:]]
        root2n = mp.sqrt(2 * order)
        for _ in range(3):
            hn, hnm1 = _last_two_mp(order, xs)
            xs = [x - a / (root2n * b - x * a) for x, a, b in zip(xs, hn, hnm1)]
        _, hnm1 = _last_two_mp(order, xs)
        ws = [1 / (order * b * b) for b in hnm1]
    return tuple(xs), tuple(ws)
