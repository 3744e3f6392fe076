"""n-dimensional boxes and interval vectors.

A ``Box`` is a domain object: the set {x : lo <= x <= hi} in R^n.  An
``IntervalVector`` is a codomain object: N scalar intervals stacked
into one value (the output type of the perturbation mechanism).  The
two are structurally identical but kept distinct so that domain
dimension n and agent count N cannot be confused.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, UsageError


def _as_vector(v) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise UsageError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lo, hi] in R^n with lo <= hi componentwise."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_vector(self.lo))
        object.__setattr__(self, "hi", _as_vector(self.hi))
        if self.lo.shape != self.hi.shape:
            raise DimensionMismatchError(
                f"lo has shape {self.lo.shape}, hi has shape {self.hi.shape}"
            )
        if self.lo.size < 1:
            raise UsageError("a box needs at least one dimension")
        if np.any(self.lo > self.hi):
            raise UsageError("box requires lo <= hi componentwise")
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def width(self) -> np.ndarray:
        """Componentwise width vector hi - lo."""
        return self.hi - self.lo

    def is_singleton(self) -> bool:
        return bool(np.all(self.lo == self.hi))

    def to_json(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @classmethod
    def from_json(cls, doc) -> "Box":
        """Accepts either the parsed {"lo": ..., "hi": ...} object or its
        JSON text."""
        obj = json.loads(doc) if isinstance(doc, (str, bytes)) else doc
        return cls(obj["lo"], obj["hi"])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))


@dataclass(frozen=True)
class IntervalVector:
    """Ordered list of N scalar intervals [lo_i, hi_i]."""

    lo: np.ndarray
    hi: np.ndarray
    empty: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_vector(self.lo))
        object.__setattr__(self, "hi", _as_vector(self.hi))
        if self.lo.shape != self.hi.shape:
            raise DimensionMismatchError("interval vector lo/hi length mismatch")
        if not self.empty and np.any(self.lo > self.hi):
            raise UsageError("interval vector requires lo <= hi per entry")
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)

    @property
    def size(self) -> int:
        return self.lo.size

    @property
    def widths(self) -> np.ndarray:
        if self.empty:
            return np.zeros(self.size)
        return self.hi - self.lo

    def diameter(self) -> float:
        """Max entry width; an empty intersection has diameter 0."""
        if self.empty:
            return 0.0
        return float(np.max(self.hi - self.lo))

    def contains_values(self, values) -> bool:
        """True iff entry i contains values[i] for all i."""
        v = _as_vector(values)
        if v.size != self.size:
            raise DimensionMismatchError("value vector length mismatch")
        if self.empty:
            return False
        return bool(np.all((self.lo <= v) & (v <= self.hi)))

    def contains(self, other: "IntervalVector") -> bool:
        if other.size != self.size:
            raise DimensionMismatchError("interval vector length mismatch")
        if other.empty:
            return True
        if self.empty:
            return False
        return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))

    def inflate(self, lo_margin, hi_margin) -> "IntervalVector":
        """Widen each entry by nonnegative margins."""
        ml, mh = _as_vector(lo_margin), _as_vector(hi_margin)
        if np.any(ml < 0) or np.any(mh < 0):
            raise UsageError("margins must be nonnegative")
        return IntervalVector(self.lo - ml, self.hi + mh)

    def to_json(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist(), "empty": self.empty}


EMPTY_MARKER = "empty"


def diameter(b: Box) -> float:
    """Interval width of a box: the inf-norm of hi - lo."""
    return float(np.max(b.hi - b.lo))


def intersect(a: IntervalVector, b: IntervalVector) -> IntervalVector:
    """Componentwise intersection; returns an empty-marked vector when
    any component has max(lo) > min(hi)."""
    if a.size != b.size:
        raise DimensionMismatchError(
            f"cannot intersect interval vectors of length {a.size} and {b.size}"
        )
    if a.empty or b.empty:
        return IntervalVector(a.lo, a.lo, empty=True)
    lo = np.maximum(a.lo, b.lo)
    hi = np.minimum(a.hi, b.hi)
    if np.any(lo > hi):
        return IntervalVector(lo, lo, empty=True)
    return IntervalVector(lo, hi)


def contains(outer: Box, inner: Box) -> bool:
    """True iff inner is a subbox of outer."""
    if outer.dim != inner.dim:
        raise DimensionMismatchError(
            f"boxes of dimension {outer.dim} and {inner.dim}"
        )
    return bool(np.all(outer.lo <= inner.lo) and np.all(inner.hi <= outer.hi))


def sample_subintervals(b: Box, count: int, seed: int) -> list[Box]:
    """Deterministic list of `count` subboxes of b.

    The box itself comes first and at least one singleton is included
    (brute-force oracle support); every output satisfies contains(b, .).
    """
    if count < 1:
        raise UsageError("count must be >= 1")
    out = [b]
    if count == 1:
        return out
    rng = np.random.default_rng(seed)
    center = 0.5 * (b.lo + b.hi)
    out.append(Box(center, center))
    while len(out) < count:
        u = rng.random((2, b.dim))
        lo = b.lo + np.minimum(u[0], u[1]) * (b.hi - b.lo)
        hi = b.lo + np.maximum(u[0], u[1]) * (b.hi - b.lo)
        out.append(Box(lo, hi))
    return out[:count]
