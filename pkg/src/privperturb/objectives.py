"""Agent objectives: evaluators, gradients, and verified Jacobian bounds.

The central contract (needed by every downstream module) is that an
``ObjectiveSpec`` carries row vectors ``jac_lo <= grad(x) <= jac_hi``
valid over its whole domain box.  For polynomials these bounds are
computed automatically by sound (monomial-wise) interval evaluation of
each partial derivative; for anything else the caller must supply them.

Evaluators are vectorized: ``evaluate`` maps an (..., n) array to (...)
and ``gradient`` maps (..., n) to (..., n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, UsageError
from .intervals import Box


# ---------------------------------------------------------------------------
# scalar interval helpers (value arithmetic, not the Box domain type)

def _interval_pow(lo: float, hi: float, k: int) -> tuple[float, float]:
    if k == 0:
        return 1.0, 1.0
    if k % 2 == 1 or lo >= 0:
        return lo**k, hi**k
    if hi <= 0:
        return hi**k, lo**k
    # even power straddling zero
    return 0.0, max(lo**k, hi**k)


def _interval_mul(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    cands = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(cands), max(cands)


def _interval_scale(c: float, a: tuple[float, float]) -> tuple[float, float]:
    return (c * a[0], c * a[1]) if c >= 0 else (c * a[1], c * a[0])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialObjective:
    """Multivariate polynomial: sum of c * prod_j x_j**e_j terms."""

    dim: int
    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def __post_init__(self):
        norm = []
        for c, e in self.terms:
            e = tuple(int(k) for k in e)
            if len(e) != self.dim:
                raise DimensionMismatchError("term exponent length != dim")
            if any(k < 0 for k in e):
                raise UsageError("exponents must be nonnegative")
            norm.append((float(c), e))
        # merge duplicate exponent tuples for determinism
        merged: dict[tuple[int, ...], float] = {}
        for c, e in norm:
            merged[e] = merged.get(e, 0.0) + c
        object.__setattr__(
            self, "terms", tuple(sorted((c, e) for e, c in merged.items() if c != 0.0))
        )

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionMismatchError("point dimension mismatch")
        out = np.zeros(x.shape[:-1])
        for c, e in self.terms:
            term = np.full(x.shape[:-1], c)
            for j, k in enumerate(e):
                if k:
                    term = term * x[..., j] ** k
            out = out + term
        return out

    def partial(self, j: int) -> "PolynomialObjective":
        terms = []
        for c, e in self.terms:
            if e[j] == 0:
                continue
            e2 = list(e)
            e2[j] -= 1
            terms.append((c * e[j], tuple(e2)))
        return PolynomialObjective(self.dim, tuple(terms))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        parts = [self.partial(j).evaluate(x) for j in range(self.dim)]
        return np.stack(parts, axis=-1)

    # -- sound range bounds -------------------------------------------------

    def value_bounds(self, box: Box) -> tuple[float, float]:
        """Sound enclosure of the polynomial range over a box (monomial-wise)."""
        if box.dim != self.dim:
            raise DimensionMismatchError("box dimension mismatch")
        lo = hi = 0.0
        for c, e in self.terms:
            acc = (1.0, 1.0)
            for j, k in enumerate(e):
                if k:
                    acc = _interval_mul(acc, _interval_pow(box.lo[j], box.hi[j], k))
            tl, th = _interval_scale(c, acc)
            lo, hi = lo + tl, hi + th
        return lo, hi

    def gradient_bounds(self, box: Box) -> tuple[np.ndarray, np.ndarray]:
        los, his = [], []
        for j in range(self.dim):
            lo, hi = self.partial(j).value_bounds(box)
            los.append(lo)
            his.append(hi)
        return np.array(los), np.array(his)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "PolynomialObjective") -> "PolynomialObjective":
        if other.dim != self.dim:
            raise DimensionMismatchError("cannot add polynomials of different dims")
        return PolynomialObjective(self.dim, self.terms + other.terms)

    def __sub__(self, other: "PolynomialObjective") -> "PolynomialObjective":
        return self + other.scale(-1.0)

    def __mul__(self, other: "PolynomialObjective") -> "PolynomialObjective":
        if other.dim != self.dim:
            raise DimensionMismatchError("cannot multiply polynomials of different dims")
        terms = []
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                terms.append((c1 * c2, tuple(a + b for a, b in zip(e1, e2))))
        return PolynomialObjective(self.dim, tuple(terms))

    def scale(self, c: float) -> "PolynomialObjective":
        return PolynomialObjective(self.dim, tuple((c * k, e) for k, e in self.terms))

    @classmethod
    def affine(cls, slope, offset: float = 0.0) -> "PolynomialObjective":
        """offset + slope . x"""
        slope = np.atleast_1d(np.asarray(slope, dtype=float))
        n = slope.size
        terms = [(offset, (0,) * n)]
        for j, s in enumerate(slope):
            e = [0] * n
            e[j] = 1
            terms.append((float(s), tuple(e)))
        return cls(n, tuple(terms))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "terms": [{"c": c, "e": list(e)} for c, e in self.terms]}

    @classmethod
    def from_dict(cls, obj: dict) -> "PolynomialObjective":
        return cls(obj["dim"], tuple((t["c"], tuple(t["e"])) for t in obj["terms"]))

    @classmethod
    def from_json(cls, doc) -> "PolynomialObjective":
        """Accepts either the parsed JSON object or its text."""
        obj = json.loads(doc) if isinstance(doc, (str, bytes)) else doc
        return cls.from_dict(obj)


@dataclass(frozen=True)
class ObjectiveSpec:
    """An agent objective with verified Jacobian bounds over its domain."""

    dim: int
    evaluate: callable
    gradient: callable
    jac_lo: np.ndarray
    jac_hi: np.ndarray
    domain: Box
    poly: PolynomialObjective | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "jac_lo", np.atleast_1d(np.asarray(self.jac_lo, float)))
        object.__setattr__(self, "jac_hi", np.atleast_1d(np.asarray(self.jac_hi, float)))
        if self.jac_lo.size != self.dim or self.jac_hi.size != self.dim:
            raise DimensionMismatchError("Jacobian bound length != dim")
        if self.domain.dim != self.dim:
            raise DimensionMismatchError("domain dimension != dim")
        if np.any(self.jac_lo > self.jac_hi):
            raise UsageError("jac_lo must be <= jac_hi componentwise")


def poly_to_spec(p: PolynomialObjective, domain: Box) -> ObjectiveSpec:
    """Wrap a polynomial as an ObjectiveSpec with auto-computed bounds.

    The bounds enclose the true gradient range over the domain (sound,
    possibly not tight).
    """
    if domain.dim != p.dim:
        raise DimensionMismatchError("domain dimension != polynomial dimension")
    lo, hi = p.gradient_bounds(domain)
    return ObjectiveSpec(
        dim=p.dim,
        evaluate=p.evaluate,
        gradient=p.gradient,
        jac_lo=lo,
        jac_hi=hi,
        domain=domain,
        poly=p,
    )


@dataclass(frozen=True)
class AgentProblem:
    """N objectives sharing one domain box."""

    objectives: tuple[ObjectiveSpec, ...]

    def __post_init__(self):
        if not self.objectives:
            raise UsageError("an agent problem needs at least one objective")
        object.__setattr__(self, "objectives", tuple(self.objectives))
        d0 = self.objectives[0].domain
        for spec in self.objectives:
            if spec.domain != d0:
                raise UsageError("all objectives must share the same domain box")

    @property
    def n_agents(self) -> int:
        return len(self.objectives)

    @property
    def dim(self) -> int:
        return self.objectives[0].dim

    @property
    def domain(self) -> Box:
        return self.objectives[0].domain


def sum_objective(problem: AgentProblem) -> ObjectiveSpec:
    """The summed objective; Jacobian bounds add exactly."""
    specs = problem.objectives
    if len(specs) == 1:
        return specs[0]

    def evaluate(x, _specs=specs):
        return sum(s.evaluate(x) for s in _specs)

    def gradient(x, _specs=specs):
        return sum(s.gradient(x) for s in _specs)

    poly = None
    if all(s.poly is not None for s in specs):
        poly = specs[0].poly
        for s in specs[1:]:
            poly = poly + s.poly
    return ObjectiveSpec(
        dim=specs[0].dim,
        evaluate=evaluate,
        gradient=gradient,
        jac_lo=sum(s.jac_lo for s in specs),
        jac_hi=sum(s.jac_hi for s in specs),
        domain=specs[0].domain,
        poly=poly,
    )


def penalize(
    objective: ObjectiveSpec,
    ineq: tuple[PolynomialObjective, ...] = (),
    eq: tuple[PolynomialObjective, ...] = (),
    weight: float = 1.0,
    jac_bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> ObjectiveSpec:
    """Quadratic-penalty reduction to a box-constrained objective.

    Builds f + weight * (sum max(0, G_k)^2 + sum H_k^2).  Constraints
    must either be polynomials (bounds recomputed by interval
    evaluation) or the caller must supply ``jac_bounds`` for the result.
    """
    if weight < 0:
        raise UsageError("penalty weight must be nonnegative")
    if not ineq and not eq:
        return objective

    polys_only = all(isinstance(g, PolynomialObjective) for g in (*ineq, *eq))
    if not polys_only and jac_bounds is None:
        raise UsageError(
            "non-polynomial constraints require caller-supplied jac_bounds"
        )

    ineq = tuple(ineq)
    eq = tuple(eq)

    def evaluate(x, _f=objective.evaluate, _w=weight):
        val = _f(x)
        for g in ineq:
            val = val + _w * np.maximum(0.0, g.evaluate(x)) ** 2
        for h in eq:
            val = val + _w * h.evaluate(x) ** 2
        return val

    def gradient(x, _g=objective.gradient, _w=weight):
        grad = _g(x)
        for g in ineq:
            act = np.maximum(0.0, g.evaluate(x))
            grad = grad + 2.0 * _w * act[..., None] * g.gradient(x)
        for h in eq:
            grad = grad + 2.0 * _w * h.evaluate(x)[..., None] * h.gradient(x)
        return grad

    if jac_bounds is not None:
        lo, hi = jac_bounds
    else:
        lo = objective.jac_lo.copy()
        hi = objective.jac_hi.copy()
        box = objective.domain
        for g in ineq:
            vlo, vhi = g.value_bounds(box)
            act = (max(0.0, vlo), max(0.0, vhi))  # max(0, G) range
            glo, ghi = g.gradient_bounds(box)
            for j in range(objective.dim):
                tl, th = _interval_mul(act, (glo[j], ghi[j]))
                lo[j] += 2.0 * weight * tl
                hi[j] += 2.0 * weight * th
        for h in eq:
            vlo, vhi = h.value_bounds(box)
            glo, ghi = h.gradient_bounds(box)
            for j in range(objective.dim):
                tl, th = _interval_mul((vlo, vhi), (glo[j], ghi[j]))
                lo[j] += 2.0 * weight * tl
                hi[j] += 2.0 * weight * th

    # penalized objective is polynomial iff there are no inequality terms
    poly = None
    if polys_only and not ineq and objective.poly is not None:
        poly = objective.poly
        for h in eq:
            poly = poly + (h * h).scale(weight)

    return ObjectiveSpec(
        dim=objective.dim,
        evaluate=evaluate,
        gradient=gradient,
        jac_lo=lo,
        jac_hi=hi,
        domain=objective.domain,
        poly=poly,
    )
