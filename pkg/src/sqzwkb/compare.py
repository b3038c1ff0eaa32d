"""Quantitative comparison of two photon-number distributions."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .distribution import FLAG_NONE
from .errors import IncompatibleDistributionError, RangeTooShortError

REL_ERROR_FLOOR = 1e-12
LAST_MAX_THRESHOLD = 1e-10


@dataclass
class ComparisonReport:
    """Differences of ``b`` against the reference ``a`` over the shared m range.

    Relative errors are None where the reference is at or below
    REL_ERROR_FLOOR or either entry is flagged.
    """

    n: int
    r: float
    method_a: str
    method_b: str
    m_max: int
    per_m_abs_error: list
    per_m_rel_error: list
    total_variation: float
    last_max_location_a: int
    last_max_location_b: int
    rel_error_at_last_max: float
    flag_at_last_max_b: str
    flags_summary: dict

    def to_dict(self):
        return asdict(self)


def _parity_class(d):
    return d.n % 2


def last_maximum(d, threshold=LAST_MAX_THRESHOLD):
    """Largest m with m - n even that is a strict local maximum of P on that subsequence.

    Entries at or below ``threshold`` times the largest value are ignored,
    which keeps the answer invariant under rescaling. The first entry of the
    subsequence counts as a maximum when it exceeds its successor; the last
    one never does, since the range might cut the distribution short. A
    distribution with a single support point returns that point.
    """
    vals = np.where(d.unflagged, d.values, np.nan)
    support = np.flatnonzero(np.nan_to_num(vals) > 0)
    if support.size == 1:
        # a single support point is its own maximum whatever its parity
        return int(support[0])
    idx = np.arange(_parity_class(d), len(vals), 2)
    sub = vals[idx]
    finite = sub[np.isfinite(sub)]
    if finite.size == 0 or np.max(finite) <= 0:
        raise RangeTooShortError("distribution has no positive entries")
    floor = threshold * np.max(finite)
    best = None
    for i in range(len(sub) - 1):
        v = sub[i]
        if not np.isfinite(v) or v <= floor:
            continue
        left_ok = i == 0 or not (sub[i - 1] >= v)
        right_ok = not (sub[i + 1] >= v)
        if left_ok and right_ok:
            best = int(idx[i])
    if best is None:
        raise RangeTooShortError("no local maximum inside the index range")
    return best


def _try_last_max(d):
    try:
        return last_maximum(d)
    except RangeTooShortError:
        return None


def compare(a, b):
    """Compare ``b`` against reference ``a``; both must share (n, r)."""
    if a.n != b.n or not math.isclose(a.r, b.r, rel_tol=0.0, abs_tol=1e-15):
        raise IncompatibleDistributionError(
            f"cannot compare (n={a.n}, r={a.r}) with (n={b.n}, r={b.r})")
    k = min(len(a.values), len(b.values))
    if k == 0:
        raise IncompatibleDistributionError("no overlapping index range")
    va, vb = a.values[:k], b.values[:k]
    ok = a.unflagged[:k] & b.unflagged[:k] & np.isfinite(va) & np.isfinite(vb)
    diff = np.where(ok, np.abs(va - vb), np.nan)
    keep = ok & (np.abs(va) > REL_ERROR_FLOOR)
    rel = np.full(k, np.nan)
    rel[keep] = diff[keep] / np.abs(va[keep])
    tv = 0.5 * float(np.sum(diff[ok]))

    loc_a = _try_last_max(a)
    loc_b = _try_last_max(b)
    rel_at = None
    flag_at = None
    if loc_a is not None and loc_a < k:
        flag_at = b.flags[loc_a]
        if flag_at == FLAG_NONE and np.isfinite(rel[loc_a]):
            rel_at = float(rel[loc_a])

    def listify(arr):
        return [None if not np.isfinite(v) else float(v) for v in arr]

    flags = {a.method.value: a.flag_counts(), b.method.value: b.flag_counts()}
    if a.method == b.method:
        flags = {a.method.value: a.flag_counts()}
    return ComparisonReport(
        n=a.n, r=a.r,
        method_a=a.method.value, method_b=b.method.value,
        m_max=k - 1,
        per_m_abs_error=listify(diff),
        per_m_rel_error=listify(rel),
        total_variation=tv,
        last_max_location_a=loc_a,
        last_max_location_b=loc_b,
        rel_error_at_last_max=rel_at,
        flag_at_last_max_b=flag_at,
        flags_summary=flags,
    )
