"""Sign-stable decomposition of objectives and the induced tight
interval enclosure.

Every objective with Jacobian bounds [jac_lo, jac_hi] splits as
f(x) = h(x) + m.x where m is a vertex of the bound hyper-rectangle and
the remainder h has sign-stable partials: choosing m_j = jac_hi_j makes
dh/dx_j <= 0 everywhere, choosing m_j = jac_lo_j makes it >= 0.  The
remainder therefore attains its extrema at box vertices, which the
selector matrix B picks out, and the resulting enclosure of f + extra
affine terms is tight in the remainder part.

Note on B: it encodes the sign of the *remainder's* partials (B_jj = 1
iff m_j = jac_lo_j, i.e. the remainder is nondecreasing in x_j).  This
is the construction under which the two ordered corner evaluations of
h_d really are min and max of h over the box.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import CapacityError, PreconditionError, UsageError
from .intervals import Box, contains
from .objectives import ObjectiveSpec

VERTEX_ENUM_CAP = 16


@dataclass(frozen=True)
class SlopeVertex:
    """One vertex of the Jacobian-bound hyper-rectangle.

    choice_mask[j] = 1 means m_j = jac_hi_j, 0 means m_j = jac_lo_j
    (ties jac_lo_j == jac_hi_j are recorded as 0 for determinism).
    """

    m: np.ndarray
    choice_mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", np.atleast_1d(np.asarray(self.m, float)))
        object.__setattr__(
            self, "choice_mask", np.atleast_1d(np.asarray(self.choice_mask, int))
        )


@dataclass(frozen=True)
class JssDecomposition:
    """f = remainder + m.x with a sign-stable remainder."""

    base: ObjectiveSpec
    vertex: SlopeVertex
    remainder_eval: callable
    selector: np.ndarray  # diagonal of B, shape (n,)


@dataclass(frozen=True)
class RemainderExtrema:
    h_min: float
    h_max: float

    @property
    def width(self) -> float:
        return self.h_max - self.h_min


def enumerate_vertices(spec: ObjectiveSpec) -> list[SlopeVertex]:
    """All 2^n slope vertices (duplicates collapsed on degenerate bounds)."""
    n = spec.dim
    if n > VERTEX_ENUM_CAP:
        raise CapacityError(
            f"vertex enumeration is 2^n; n={n} exceeds the cap of {VERTEX_ENUM_CAP}"
        )
    free = [j for j in range(n) if spec.jac_lo[j] != spec.jac_hi[j]]
    out = []
    for bits in product((0, 1), repeat=len(free)):
        mask = np.zeros(n, dtype=int)
        for j, b in zip(free, bits):
            mask[j] = b
        m = np.where(mask == 1, spec.jac_hi, spec.jac_lo)
        out.append(SlopeVertex(m=m, choice_mask=mask))
    return out


def decompose(spec: ObjectiveSpec, vertex: SlopeVertex) -> JssDecomposition:
    """Split f into the affine part m.x and the sign-stable remainder.

    B_jj = 1 iff m_j = jac_lo_j (remainder nondecreasing in x_j).
    """
    m = vertex.m
    if m.size != spec.dim:
        raise UsageError("vertex dimension mismatch")
    at_lo = np.isclose(m, spec.jac_lo) & ~np.isclose(m, spec.jac_hi)
    at_hi = np.isclose(m, spec.jac_hi)
    if not np.all(at_lo | at_hi):
        raise UsageError("vertex components must equal jac_lo or jac_hi")
    selector = np.where(at_hi, 0, 1)

    def remainder(x, _f=spec.evaluate, _m=m):
        x = np.asarray(x, dtype=float)
        return _f(x) - x @ _m

    return JssDecomposition(
        base=spec, vertex=vertex, remainder_eval=remainder, selector=selector
    )


def h_d(dec: JssDecomposition, x1, x2) -> float:
    """Remainder evaluated at the selector-chosen vertex B x1 + (I-B) x2."""
    x1 = np.atleast_1d(np.asarray(x1, float))
    x2 = np.atleast_1d(np.asarray(x2, float))
    if not (np.all(x1 <= x2) or np.all(x2 <= x1)):
        raise UsageError("h_d requires an ordered pair (x1 <= x2 or x2 <= x1)")
    corner = np.where(dec.selector == 1, x1, x2)
    return float(dec.remainder_eval(corner))


def remainder_extrema(dec: JssDecomposition, box: Box) -> RemainderExtrema:
    """Tight min/max of the remainder over a subbox of the domain.

    By sign-stability both extrema sit at box vertices: the minimum at
    h_d(lo, hi) and the maximum at h_d(hi, lo).
    """
    if not contains(dec.base.domain, box):
        raise UsageError("box must lie inside the decomposition domain")
    h_min = h_d(dec, box.lo, box.hi)
    h_max = h_d(dec, box.hi, box.lo)
    return RemainderExtrema(h_min=h_min, h_max=h_max)


def inclusion(dec: JssDecomposition, box: Box, extra_slope=None) -> tuple[float, float]:
    """Interval enclosing {f(x) + extra_slope . x : x in box}.

    The effective affine slope is m_hat = m + extra_slope; the enclosure
    is [h_min + m_hat+ . lo - m_hat- . hi, h_max + m_hat+ . hi - m_hat- . lo],
    whose width is exactly width(remainder) + |m_hat| . (hi - lo).
    """
    ext = remainder_extrema(dec, box)
    m_hat = dec.vertex.m.copy()
    if extra_slope is not None:
        m_hat = m_hat + np.atleast_1d(np.asarray(extra_slope, float))
    m_pos = np.maximum(m_hat, 0.0)
    m_neg = m_pos - m_hat
    lo = ext.h_min + m_pos @ box.lo - m_neg @ box.hi
    hi = ext.h_max + m_pos @ box.hi - m_neg @ box.lo
    return float(lo), float(hi)


def range_width(dec: JssDecomposition, box: Box, extra_slope=None) -> float:
    """Width of the enclosure: width(remainder) + sum_j |m_hat_j| width_j."""
    ext = remainder_extrema(dec, box)
    m_hat = dec.vertex.m.copy()
    if extra_slope is not None:
        m_hat = m_hat + np.atleast_1d(np.asarray(extra_slope, float))
    return float(ext.width + np.abs(m_hat) @ (box.hi - box.lo))
