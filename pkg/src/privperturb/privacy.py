"""The perturbation mechanism, its privacy-gap certificate, and direct
verification of the defining diameter inequality.

The mechanism publishes, per agent, the tight interval enclosure of the
perturbed objective g_i = f_i + slope_i . x over the domain box.  Its
privacy gap is

    eps_i = min over slope vertices m of
            ln((C + 2 delta_i) / C) / delta_i,   C = width(h) + |m + slope_i| . width

so the minimizing vertex is the one maximizing the enclosure width C
(independent of delta_i).  The published interval is built from that
same vertex, so the certificate certifies exactly what is published.

The vicinity norm used in the exponent of the diameter inequality is
the sup norm over the domain box: it is the norm under which the
certificate's algebra closes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .accuracy import delta_star
from .decomposition import (
    JssDecomposition,
    SlopeVertex,
    decompose,
    enumerate_vertices,
    inclusion,
    range_width,
)
from .errors import (
    AdjacencyError,
    DimensionMismatchError,
    PreconditionError,
    UsageError,
)
from .intervals import Box, IntervalVector, contains, intersect
from .objectives import AgentProblem, ObjectiveSpec, PolynomialObjective, poly_to_spec


@dataclass(frozen=True)
class Mechanism:
    """Per-agent perturbation slopes plus vicinity radii."""

    slopes: np.ndarray  # (N, n)
    vicinity_radii: np.ndarray  # (N,)
    domain: Box

    def __post_init__(self):
        object.__setattr__(
            self, "slopes", np.atleast_2d(np.asarray(self.slopes, float))
        )
        object.__setattr__(
            self, "vicinity_radii", np.atleast_1d(np.asarray(self.vicinity_radii, float))
        )
        if self.slopes.shape[0] != self.vicinity_radii.size:
            raise DimensionMismatchError("slope and radius counts differ")
        if self.slopes.shape[1] != self.domain.dim:
            raise DimensionMismatchError("slope dimension != domain dimension")
        if np.any(self.vicinity_radii <= 0):
            raise UsageError("vicinity radii must be positive")

    @property
    def n_agents(self) -> int:
        return self.slopes.shape[0]

    @classmethod
    def from_slopes(cls, slopes, domain: Box, radii=None) -> "Mechanism":
        """Build a mechanism; radii default to the slope-induced values
        delta*(slope_i), which tie each vicinity to its slope magnitude."""
        slopes = np.atleast_2d(np.asarray(slopes, float))
        if radii is None:
            radii = np.array([delta_star(s, domain) for s in slopes])
        return cls(slopes=slopes, vicinity_radii=radii, domain=domain)


@dataclass(frozen=True)
class PrivacyReport:
    per_agent_eps: tuple[float, ...]
    overall_eps: float
    minimizing_vertex: tuple[SlopeVertex, ...]
    diam_true: tuple[float, ...]  # per-agent published interval widths
    radii: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "per_agent_eps": list(self.per_agent_eps),
            "overall_eps": self.overall_eps,
            "vertex_masks": [v.choice_mask.tolist() for v in self.minimizing_vertex],
            "diameters": list(self.diam_true),
            "radii": list(self.radii),
        }


@dataclass(frozen=True)
class VicinityCertificate:
    agent_index: int | None  # None when the two problems are identical
    sup_distance: float
    within: bool


def _check_not_singleton(domain: Box):
    if domain.is_singleton():
        raise PreconditionError(
            "privacy gap is undefined on a singleton domain (zero diameter)"
        )


def epsilon_gap(spec: ObjectiveSpec, slope, delta: float) -> tuple[float, SlopeVertex]:
    """Privacy gap of one agent: the exact minimum over all slope
    vertices, together with the argmin vertex."""
    _check_not_singleton(spec.domain)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    slope = np.atleast_1d(np.asarray(slope, float))
    best_eps, best_vertex = math.inf, None
    for vertex in enumerate_vertices(spec):
        dec = decompose(spec, vertex)
        width = range_width(dec, spec.domain, slope)
        eps = math.log((width + 2.0 * delta) / width) / delta
        if eps < best_eps:
            best_eps, best_vertex = eps, vertex
    return best_eps, best_vertex


def minimizing_decomposition(spec: ObjectiveSpec, slope) -> JssDecomposition:
    """Decomposition at the gap-minimizing vertex (equivalently, the
    vertex maximizing the published interval width)."""
    # any positive delta yields the same argmin vertex
    _, vertex = epsilon_gap(spec, slope, 1.0)
    return decompose(spec, vertex)


def apply_mechanism(problem: AgentProblem, mech: Mechanism, box: Box) -> IntervalVector:
    """Per-agent interval enclosures of g_i = f_i + slope_i . x over box."""
    if mech.n_agents != problem.n_agents:
        raise UsageError("mechanism sized for a different number of agents")
    if not contains(problem.domain, box):
        raise UsageError("query box must lie inside the problem domain")
    los, his = [], []
    for spec, slope in zip(problem.objectives, mech.slopes):
        dec = minimizing_decomposition(spec, slope)
        lo, hi = inclusion(dec, box, slope)
        los.append(lo)
        his.append(hi)
    return IntervalVector(np.array(los), np.array(his))


def privacy_report(problem: AgentProblem, mech: Mechanism) -> PrivacyReport:
    if mech.n_agents != problem.n_agents:
        raise UsageError("mechanism sized for a different number of agents")
    eps_list, vertices, widths = [], [], []
    for spec, slope, delta in zip(
        problem.objectives, mech.slopes, mech.vicinity_radii
    ):
        eps, vertex = epsilon_gap(spec, slope, float(delta))
        dec = decompose(spec, vertex)
        widths.append(range_width(dec, spec.domain, slope))
        eps_list.append(eps)
        vertices.append(vertex)
    return PrivacyReport(
        per_agent_eps=tuple(eps_list),
        overall_eps=max(eps_list),
        minimizing_vertex=tuple(vertices),
        diam_true=tuple(widths),
        radii=tuple(float(d) for d in mech.vicinity_radii),
    )


# ---------------------------------------------------------------------------
# adjacency


def _specs_equal(a: ObjectiveSpec, b: ObjectiveSpec) -> bool:
    if a.poly is not None and b.poly is not None:
        return a.poly.terms == b.poly.terms
    # fall back to a deterministic sample comparison
    rng = np.random.default_rng(0)
    pts = a.domain.lo + rng.random((256, a.dim)) * (a.domain.hi - a.domain.lo)
    va, vb = a.evaluate(pts), b.evaluate(pts)
    scale = 1.0 + np.maximum(np.abs(va), np.abs(vb))
    return bool(np.all(np.abs(va - vb) <= 1e-12 * scale))


def _sup_abs_difference(a: ObjectiveSpec, b: ObjectiveSpec) -> float:
    """Upper bound on sup_{x in domain} |b(x) - a(x)|; exact for affine
    differences (corner evaluation)."""
    box = a.domain
    if a.poly is not None and b.poly is not None:
        d = b.poly - a.poly
        if all(sum(e) <= 1 for _, e in d.terms):
            # affine difference: max |d| at box corners
            corners = np.array(
                [
                    [box.hi[j] if (k >> j) & 1 else box.lo[j] for j in range(box.dim)]
                    for k in range(2**box.dim)
                ]
            )
            return float(np.max(np.abs(d.evaluate(corners))))
        dspec = poly_to_spec(d, box)
    else:
        def diff_eval(x, _a=a.evaluate, _b=b.evaluate):
            return _b(x) - _a(x)

        def diff_grad(x, _a=a.gradient, _b=b.gradient):
            return _b(x) - _a(x)

        dspec = ObjectiveSpec(
            dim=a.dim,
            evaluate=diff_eval,
            gradient=diff_grad,
            jac_lo=b.jac_lo - a.jac_hi,
            jac_hi=b.jac_hi - a.jac_lo,
            domain=box,
        )
    # tightest enclosure across vertices is still sound
    best = math.inf
    for vertex in enumerate_vertices(dspec):
        lo, hi = inclusion(decompose(dspec, vertex), box)
        best = min(best, max(abs(lo), abs(hi)))
    return best


def check_adjacency(
    F: AgentProblem, Fp: AgentProblem, mech: Mechanism
) -> VicinityCertificate:
    """Locate the (at most one) differing agent and bound the sup
    distance between its two objectives over the domain."""
    if F.n_agents != Fp.n_agents:
        raise UsageError("problems have different agent counts")
    if F.domain != Fp.domain:
        raise UsageError("problems have different domains")
    differing = [
        i
        for i, (a, b) in enumerate(zip(F.objectives, Fp.objectives))
        if not _specs_equal(a, b)
    ]
    if len(differing) > 1:
        raise AdjacencyError(
            f"problems differ in agents {differing}; adjacency permits at most one"
        )
    if not differing:
        return VicinityCertificate(agent_index=None, sup_distance=0.0, within=True)
    i0 = differing[0]
    sup = _sup_abs_difference(F.objectives[i0], Fp.objectives[i0])
    radius = float(mech.vicinity_radii[i0])
    # relative slack absorbs coefficient-cancellation noise when the
    # perturbation sits exactly on the vicinity boundary
    return VicinityCertificate(
        agent_index=i0,
        sup_distance=sup,
        within=bool(sup <= radius * (1.0 + 1e-9) + 1e-12),
    )


@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    lhs: float  # diam of the intersected perturbed output
    rhs: float  # exp(eps * distance) * diam of the reference output
    margin: float  # rhs - lhs


def verify_privacy_inequality(
    F: AgentProblem,
    Fp: AgentProblem,
    mech: Mechanism,
    witness: IntervalVector,
) -> InequalityCheck:
    """Directly evaluate the diameter inequality

        diam(M(F', X0) cap I) <= exp(eps * ||f - f'||) * diam(M(F, X0))

    for a witness interval I containing M(F, X0)."""
    base = apply_mechanism(F, mech, F.domain)
    if not witness.contains(base):
        raise PreconditionError("witness interval must contain the mechanism output")
    cert = check_adjacency(F, Fp, mech)
    if not cert.within:
        raise PreconditionError(
            f"perturbed problem leaves the vicinity: sup distance {cert.sup_distance}"
        )
    eps = privacy_report(F, mech).overall_eps
    perturbed = apply_mechanism(Fp, mech, F.domain)
    lhs = intersect(perturbed, witness).diameter()
    rhs = math.exp(eps * cert.sup_distance) * base.diameter()
    margin = rhs - lhs
    return InequalityCheck(
        holds=bool(lhs <= rhs + 1e-9 * (1.0 + abs(rhs))),
        lhs=lhs,
        rhs=rhs,
        margin=margin,
    )
