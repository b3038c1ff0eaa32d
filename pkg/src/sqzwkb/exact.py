"""Exact photon-number amplitudes W_mn = <m|S(r)|n> by two independent routes.

Quadrature route
    W_mn = integral of h_m(x) e^{r/2} h_n(e^r x) dx. The integrand is a
    polynomial times exp(-(1 + e^{2r}) x^2 / 2); substituting x = s y with
    s = sqrt(2 / (1 + e^{2r})) makes it a polynomial times exp(-y^2), which
    a Gauss-Hermite rule of order >= (m + n)/2 + 1 integrates exactly.
    Sums run in long double where the platform has it. Small amplitudes are
    sums of much larger terms of both signs; when the ratio kappa of the
    absolute sum to the sum, times the working epsilon, signals a loss of
    accuracy, the row is recomputed with a multiprecision rule.

Recurrence route
    With b = S a S^dagger = cosh(r) a + sinh(r) a^dagger the column
    W_{., n} is the eigenvector of b^dagger b with eigenvalue n. In the Fock
    basis this reads, for every m,

        c_m W_m + d_m W_{m-2} + d_{m+2} W_{m+2} = 0,
        c_m = cosh^2(r) m + sinh^2(r) (m + 1) - n,
        d_m = cosh(r) sinh(r) sqrt(m (m - 1)).

    The lowest allowed entry is fixed in closed form by b|psi_0> = 0 and
    b^dagger|psi_k> = sqrt(k+1)|psi_{k+1}> at m = 0:

        W_{0,2k}   = sech(r)^{1/2} tanh(r)^k sqrt((2k)!) / (2^k k!)
        W_{1,2k+1} = sqrt(2k+1) W_{0,2k} / cosh(r)

    The recurrence is run forward up to the upper classical edge
    m ~ ((2n+1) e^{2|r|} - 1)/2, where the wanted solution is dominant, and
    backward (Miller's algorithm) through the decaying tail beyond it. The
    two segments are matched at the edge; their disagreement one step
    earlier is the loss-of-precision monitor.
"""

import math

import mpmath as mp
import numpy as np

from .distribution import Distribution, Method, clamp_tiny
from .errors import QuadratureOrderError, RecurrenceInstabilityError
from .special_fn import (EXTENDED_AVAILABLE, MP_DPS, gauss_hermite_half_rule_mp, gauss_hermite_rule,
                         hermite_function, hermite_function_table, hermite_function_table_mp)

ORDER_MARGIN = 40
ORDER_CAP = 4000
MATCH_TOLERANCE = 1e-8

# precision escalation: amplitudes above REFINE_FLOOR whose cancellation
# estimate kappa * eps exceeds REFINE_RTOL are recomputed in multiprecision
REFINE_RTOL = 1e-13
REFINE_FLOOR = 1e-14
REFINE_ORDER_CAP = 512

_RESCALE_AT = 1e150


def quadrature_order(m, n, margin=ORDER_MARGIN, cap=ORDER_CAP):
    order = m + n + margin
    if order > cap:
        raise QuadratureOrderError(f"quadrature order {order} exceeds cap {cap}")
    return order


def _scaled_nodes(r, order):
    """Rule plus the constants s and e^r, all in the working precision."""
    rule = gauss_hermite_rule(order, extended=EXTENDED_AVAILABLE)
    dt = rule.nodes.dtype.type
    er = np.exp(dt(r))
    s = np.sqrt(dt(2) / (1 + er * er))
    return rule, s, er


def _prefactor(s, r):
    return s * np.exp(type(s)(r) / 2)


def _refine(ms, n, r, order):
    """Re-evaluate the quadrature sum for the rows ``ms`` in multiprecision.

    Only m - n even rows are passed, so the integrand is even and the sum
    runs over the positive half of an even-order rule.
    """
    order = min(ORDER_CAP, -(-order // 16) * 16)
    xs, ws = gauss_hermite_half_rule_mp(order)
    with mp.workdps(MP_DPS):
        rr = mp.mpf(r)
        er = mp.exp(rr)
        s = mp.sqrt(2 / (1 + er * er))
        sx = [s * x for x in xs]
        hn = hermite_function_table_mp(n, [er * v for v in sx])[-1]
        g = [w * h for w, h in zip(ws, hn)]
        table = hermite_function_table_mp(max(ms), sx)
        pre = 2 * s * mp.exp(rr / 2)
        return [float(pre * mp.fsum(a * b for a, b in zip(table[m], g))) for m in ms]


def _needs_refinement(w, kappa, eps):
    return (np.abs(w) >= REFINE_FLOOR) & (kappa * eps > REFINE_RTOL)


def exact_amplitude(m, n, r, order=None, short_circuit=True, refine=True):
    """<m|S(r)|n> by Gauss-Hermite quadrature (default order m + n + 40).

    With ``refine`` an amplitude whose terms cancel too strongly for the
    working precision is recomputed in multiprecision (orders up to
    REFINE_ORDER_CAP).
    """
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    if short_circuit and (m - n) % 2:
        return 0.0
    if short_circuit and r == 0.0:
        # S(0) is the identity
        return float(m == n)
    if order is None:
        order = quadrature_order(m, n)
    rule, s, er = _scaled_nodes(r, order)
    y = rule.nodes
    terms = rule.scaled_weights * hermite_function(m, s * y) * hermite_function(n, er * s * y)
    total = np.sum(terms)
    w = float(_prefactor(s, r) * total)
    if refine and (m - n) % 2 == 0 and order <= REFINE_ORDER_CAP:
        kappa = np.sum(np.abs(terms)) / abs(total) if total != 0 else np.inf
        if _needs_refinement(np.array([w]), np.array([kappa]), np.finfo(y.dtype).eps)[0]:
            w = _refine([m], n, r, order)[0]
    return w


def _quadrature_column(n, r, m_max, order, short_circuit, refine):
    """Column of amplitudes plus a count of refined and unrefinable rows."""
    info = {"refined": 0, "cancellation_limited": 0}
    if short_circuit and r == 0.0:
        w = np.zeros(m_max + 1)
        if n <= m_max:
            w[n] = 1.0
        return w, info
    if order is None:
        order = quadrature_order(m_max, n)
    rule, s, er = _scaled_nodes(r, order)
    y = rule.nodes
    g = rule.scaled_weights * hermite_function(n, er * s * y)
    table = hermite_function_table(m_max, s * y)
    sums = table @ g
    w = (_prefactor(s, r) * sums).astype(np.float64)
    if short_circuit:
        w[(np.arange(m_max + 1) - n) % 2 == 1] = 0.0
    if refine:
        with np.errstate(divide="ignore", invalid="ignore"):
            kappa = ((np.abs(table) @ np.abs(g)) / np.abs(sums)).astype(np.float64)
        even = (np.arange(m_max + 1) - n) % 2 == 0
        rows = np.flatnonzero(even & _needs_refinement(w, kappa, np.finfo(y.dtype).eps))
        if rows.size and order <= REFINE_ORDER_CAP:
            w[rows] = _refine(rows.tolist(), n, r, order)
            info["refined"] = int(rows.size)
        else:
            info["cancellation_limited"] = int(rows.size)
    return w, info


def exact_amplitudes(n, r, m_max, order=None, short_circuit=True, refine=True):
    """W_mn for m = 0..m_max with one shared rule of order m_max + n + 40."""
    return _quadrature_column(n, r, m_max, order, short_circuit, refine)[0]


def working_precision():
    """Label for the arithmetic used by the quadrature route."""
    return "long double" if EXTENDED_AVAILABLE else "double"


def _log_seed(n, r):
    """log|W_{p,n}| and its sign for p = n mod 2."""
    mu = math.cosh(r)
    t = math.tanh(r)
    k = n // 2
    log_w = -0.5 * math.log(mu)
    if k:
        log_w += k * math.log(abs(t)) + 0.5 * math.lgamma(2 * k + 1) - k * math.log(2.0) - math.lgamma(k + 1)
    sign = -1.0 if (t < 0 and k % 2) else 1.0
    if n % 2:
        log_w += 0.5 * math.log(n) - math.log(mu)
    return log_w, sign


def _finish(mant, logs):
    mant = np.asarray(mant)
    logs = np.asarray(logs)
    with np.errstate(divide="ignore", under="ignore"):
        return np.sign(mant) * np.exp(np.log(np.abs(mant)) + logs)


def recurrence_column(n, r, m_max):
    """W_mn for m = 0..m_max from the b^dagger b eigen-recurrence.

    Raises RecurrenceInstabilityError when the forward and backward
    segments disagree at the matching point by more than MATCH_TOLERANCE.
    """
    if n < 0 or m_max < 0:
        raise ValueError("photon numbers must be nonnegative")
    out = np.zeros(m_max + 1)
    if r == 0.0:
        if n <= m_max:
            out[n] = 1.0
        return out

    mu, nu = math.cosh(r), math.sinh(r)
    munu = mu * nu
    p = n % 2

    def c(m):
        return mu * mu * m + nu * nu * (m + 1) - n

    def d(m):
        return munu * math.sqrt(m * (m - 1.0))

    edge = int(math.floor(((2 * n + 1) * math.exp(2 * abs(r)) - 1) / 2))
    edge = max(p, edge - (edge - p) % 2)
    fwd_end = min(edge, m_max - (m_max - p) % 2) if m_max >= p else None
    if fwd_end is None:
        return out
    need_tail = m_max > edge
    if need_tail:
        fwd_end = edge

    log_seed, sign = _log_seed(n, r)
    idx = list(range(p, fwd_end + 1, 2))
    mant = [sign]
    logs = [log_seed]
    prev, cur, scale = 0.0, sign, log_seed
    for m in idx[:-1]:
        nxt = -(c(m) * cur + d(m) * prev) / d(m + 2)
        prev, cur = cur, nxt
        if abs(cur) > _RESCALE_AT:
            prev /= _RESCALE_AT
            cur /= _RESCALE_AT
            scale += math.log(_RESCALE_AT)
        mant.append(cur)
        logs.append(scale)
    fwd = _finish(mant, logs)
    out[idx] = fwd

    if not need_tail:
        return out

    # Miller: the unwanted solution shrinks by tanh(r)^2 per step downward
    t = abs(math.tanh(r))
    depth = 20 + int(math.ceil(46.0 / max(-math.log(t), 1e-12)))
    depth = min(depth, 2_000_000)
    m_top = m_max - (m_max - p) % 2
    start = m_top + 2 * depth
    # match at the largest forward entry among the last few before the edge
    window = [i for i in range(len(idx)) if idx[i] >= idx[-1] - 16]
    j_match = max(window, key=lambda i: (math.log(abs(mant[i])) + logs[i]) if mant[i] else -math.inf)
    m_match = idx[j_match]
    m_check = m_match - 2 if m_match - 2 >= p else None
    stop = m_check if m_check is not None else m_match

    back_m = []
    back_mant = []
    back_logs = []
    upper, cur, scale = 0.0, 1.0, 0.0
    m = start
    while True:
        if m <= m_top:
            back_m.append(m)
            back_mant.append(cur)
            back_logs.append(scale)
        if m <= stop:
            break
        lower = -(c(m) * cur + d(m + 2) * upper) / d(m)
        upper, cur = cur, lower
        if abs(cur) > _RESCALE_AT:
            upper /= _RESCALE_AT
            cur /= _RESCALE_AT
            scale += math.log(_RESCALE_AT)
        m -= 2

    back = dict(zip(back_m, zip(back_mant, back_logs)))
    bm, bl = back[m_match]
    fm, fl = mant[j_match], logs[j_match]
    if bm == 0.0 or fm == 0.0:
        raise RecurrenceInstabilityError("matching point fell on a zero of the column")
    log_factor = fl - bl + math.log(abs(fm / bm))
    factor_sign = math.copysign(1.0, fm / bm)

    if m_check is not None:
        cm, cl = back[m_check]
        scaled_check = factor_sign * math.copysign(1.0, cm) * math.exp(math.log(abs(cm)) + cl + log_factor) if cm else 0.0
        fwd_check = fwd[j_match - 1]
        denom = max(abs(scaled_check), abs(fwd_check))
        if denom > 0 and abs(scaled_check - fwd_check) / denom > MATCH_TOLERANCE:
            raise RecurrenceInstabilityError(
                f"forward/backward mismatch {abs(scaled_check - fwd_check) / denom:.3g} at m={m_check}")

    tail_m = [mm for mm in back_m if mm > m_match]
    if tail_m:
        tm = np.array([back[mm][0] for mm in tail_m])
        tl = np.array([back[mm][1] for mm in tail_m]) + log_factor
        out[tail_m] = factor_sign * _finish(tm, tl)
    return out


def exact_amplitude_recurrence(m, n, r):
    """<m|S(r)|n> from the eigen-recurrence (independent of quadrature)."""
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be nonnegative")
    if (m - n) % 2:
        return 0.0
    return float(recurrence_column(n, r, m)[m])


def exact_distribution(n, r, m_max, method=Method.EXACT_QUADRATURE, fallback=True):
    """P_m = |<m|S(r)|n>|^2 for m = 0..m_max.

    ``method`` selects the quadrature or the recurrence route. A recurrence
    instability falls back to quadrature when ``fallback`` is set, and the
    substitution is recorded in the metadata.
    """
    method = Method(method)
    if not method.is_exact:
        raise ValueError(f"{method.value} is not an exact method")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    meta = {"kernel": None}
    if method is Method.EXACT_RECURRENCE:
        try:
            w = recurrence_column(n, r, m_max)
            meta["match_tolerance"] = MATCH_TOLERANCE
        except RecurrenceInstabilityError as exc:
            if not fallback:
                raise
            meta["fallback"] = f"quadrature ({exc})"
            w, info = _quadrature_column(n, r, m_max, None, True, True)
            meta.update(info)
            meta["quadrature_order"] = quadrature_order(m_max, n)
            meta["working_precision"] = working_precision()
    else:
        w, info = _quadrature_column(n, r, m_max, None, True, True)
        meta.update(info)
        meta["quadrature_order"] = quadrature_order(m_max, n)
        meta["working_precision"] = working_precision()
    values, flags = clamp_tiny(w * w, [""] * (m_max + 1))
    meta["normalization"] = float(np.sum(values))
    return Distribution(n=n, r=r, method=method, values=values, flags=flags, metadata=meta)
