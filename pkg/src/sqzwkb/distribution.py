"""Photon-number distributions tagged with the method that produced them."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

FLAG_NONE = ""
FLAG_TANGENCY = "tangency"
FLAG_CLAMPED = "clamped"

CLAMP_BELOW = 1e-300


class Method(str, Enum):
    EXACT_QUADRATURE = "exact_quadrature"
    EXACT_RECURRENCE = "exact_recurrence"
    WKB = "wkb"
    COHEN_CLOSED_FORM = "cohen_closed_form"
    WIGNER_RING = "wigner_ring"

    @property
    def is_exact(self):
        return self in (Method.EXACT_QUADRATURE, Method.EXACT_RECURRENCE)


@dataclass
class Distribution:
    """P_m for m = 0..len(values)-1 in the state |n, r>.

    ``flags`` holds one marker per entry (FLAG_NONE, FLAG_TANGENCY or
    FLAG_CLAMPED); flagged values are not to be trusted as probabilities.
    """

    n: int
    r: float
    method: Method
    values: np.ndarray
    flags: list = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.method = Method(self.method)
        if self.flags is None:
            self.flags = [FLAG_NONE] * len(self.values)
        if len(self.flags) != len(self.values):
            raise ValueError("flags and values differ in length")

    @property
    def m_max(self):
        return len(self.values) - 1

    @property
    def m(self):
        return np.arange(len(self.values))

    @property
    def total(self):
        return float(np.sum(self.values[self.unflagged]))

    @property
    def unflagged(self):
        return np.array([f == FLAG_NONE for f in self.flags], dtype=bool)

    def flag_counts(self):
        counts = {}
        for f in self.flags:
            if f != FLAG_NONE:
                counts[f] = counts.get(f, 0) + 1
        return counts


def clamp_tiny(values, flags):
    """Zero out positive values below the representable-range floor, flagging them."""
    values = np.array(values, dtype=float)
    tiny = (values > 0) & (values < CLAMP_BELOW)
    for i in np.flatnonzero(tiny):
        flags[i] = FLAG_CLAMPED
    values[tiny] = 0.0
    return values, flags
