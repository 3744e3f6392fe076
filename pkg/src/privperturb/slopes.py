"""Perturbation-slope design.

The robust design problem asks, per agent, for the affine slope whose
worst-case linear-part discrepancy over all subboxes of the domain is
smallest.  Its LP reformulation (decision vector xi = [eta, rho, theta]
with dual multipliers p1, p2) is assembled verbatim in ``build_lp`` and
solved by the in-house simplex.  As printed, that LP pins theta = 0 and
the dual constraints admit only the trivial slope 0; ``design_slopes``
therefore also offers a slope-floor variant that excludes the trivial
solution by requiring |slope_j| >= floor_j, solved by sign-split corner
enumeration of the robust objective.

``brute_force_robust_value`` is the independent oracle: it evaluates
the robust objective directly on sampled subboxes (always including the
corner subintervals, where the piecewise-linear maximum is attained).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import simplex
from .decomposition import SlopeVertex
from .errors import SolverError, UsageError
from .intervals import Box, sample_subintervals


@dataclass(frozen=True)
class LpStandardForm:
    """The slope-design LP in its block matrix form."""

    n: int
    Gamma: np.ndarray  # (3n, 2n+1)
    Lambda: np.ndarray  # (2n+1, 2n+1)
    c: np.ndarray  # (2n+1,)
    d: np.ndarray  # (3n,)
    l: np.ndarray  # (2n+1,)

    @property
    def xi_dim(self) -> int:
        return 2 * self.n + 1

    def dump_text(self) -> str:
        """Canonical plain-text form for external cross-checking."""
        lines = [f"# slope-design LP, n={self.n}", "minimize c.xi"]
        lines.append("c = " + " ".join(f"{v:.17g}" for v in self.c))
        lines.append("subject to Lambda.xi <= l:")
        for row, rhs in zip(self.Lambda, self.l):
            lines.append("  " + " ".join(f"{v:.17g}" for v in row) + f" <= {rhs:.17g}")
        lines.append("p1.d <= 0, p2.d <= 0 with d:")
        lines.append("  " + " ".join(f"{v:.17g}" for v in self.d))
        lines.append("Gamma^T p1 = xi, -Gamma^T p2 = xi, p1 >= 0, p2 >= 0; Gamma:")
        for row in self.Gamma:
            lines.append("  " + " ".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SlopeDesignResult:
    xi_star: np.ndarray | None
    m_tilde_star: np.ndarray | None
    objective_value: float | None
    solver_status: str

    def to_json(self) -> dict:
        return {
            "status": self.solver_status,
            "objective_value": self.objective_value,
            "xi": None if self.xi_star is None else self.xi_star.tolist(),
            "m_tilde": None
            if self.m_tilde_star is None
            else self.m_tilde_star.tolist(),
        }


def _split_pos_neg(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pos = np.maximum(m, 0.0)
    return pos, pos - m


def build_lp(vertex: SlopeVertex, domain: Box) -> LpStandardForm:
    """Assemble the block matrices of the slope-design LP from one
    Jacobian vertex and the domain box."""
    n = domain.dim
    if vertex.m.size != n:
        raise UsageError("vertex dimension != domain dimension")
    I = np.eye(n)
    Z = np.zeros((n, n))
    z = np.zeros((n, 1))
    Gamma = np.block([[Z, -I, z], [-I, Z, z], [I, I, z]])
    Lambda = np.block(
        [
            [-I, Z, z],
            [Z, -I, z],
            [z.T, z.T, np.array([[-1.0]])],
        ]
    )
    c = np.concatenate([np.zeros(2 * n), [1.0]])
    d = np.concatenate([domain.hi, domain.lo, np.zeros(n)])
    m_pos, m_neg = _split_pos_neg(vertex.m)
    l = np.concatenate([m_pos, m_neg, [0.0]])
    return LpStandardForm(n=n, Gamma=Gamma, Lambda=Lambda, c=c, d=d, l=l)


def solve_lp(lp: LpStandardForm) -> SlopeDesignResult:
    """Solve the LP as printed; variables are xi (free) and p1, p2 >= 0.

    The LP is degenerate: whenever the optimum is 0, the point
    xi = 0, p = 0 is also optimal (Lambda.0 <= l holds because l stacks
    m+ and m-, both nonnegative).  Among alternate optima the canonical
    minimum-norm one is returned, so a zero objective always reports the
    trivial slope.
    """
    n = lp.n
    k = lp.xi_dim
    nv = k + 6 * n  # xi, p1, p2
    free = np.zeros(nv, bool)
    free[:k] = True

    c = np.zeros(nv)
    c[:k] = lp.c

    # inequalities: Lambda xi <= l ; p1.d <= 0 ; p2.d <= 0
    A_ub = np.zeros((k + 2, nv))
    A_ub[:k, :k] = lp.Lambda
    A_ub[k, k : k + 3 * n] = lp.d
    A_ub[k + 1, k + 3 * n :] = lp.d
    b_ub = np.concatenate([lp.l, [0.0, 0.0]])

    # equalities: Gamma^T p1 - xi = 0 ; Gamma^T p2 + xi = 0
    A_eq = np.zeros((2 * k, nv))
    A_eq[:k, :k] = -np.eye(k)
    A_eq[:k, k : k + 3 * n] = lp.Gamma.T
    A_eq[k:, :k] = np.eye(k)
    A_eq[k:, k + 3 * n :] = lp.Gamma.T
    b_eq = np.zeros(2 * k)

    res = simplex.solve(c, A_ub, b_ub, A_eq, b_eq, free=free)
    if res.status != simplex.OPTIMAL:
        return SlopeDesignResult(
            xi_star=None,
            m_tilde_star=None,
            objective_value=None,
            solver_status=res.status,
        )
    xi = res.x[:k]
    if abs(res.value) <= 1e-9:
        xi = np.zeros(k)  # minimum-norm optimum (see docstring)
    m_tilde = xi[:n] - xi[n : 2 * n]  # eta - rho
    return SlopeDesignResult(
        xi_star=xi,
        m_tilde_star=m_tilde,
        objective_value=float(res.value),
        solver_status=simplex.OPTIMAL,
    )


# ---------------------------------------------------------------------------
# the robust objective itself (oracle + floor variant)


def _robust_value_on_box(vertex_m: np.ndarray, m_tilde: np.ndarray, lo, hi) -> float:
    m_pos, m_neg = _split_pos_neg(vertex_m)
    mh_pos, mh_neg = _split_pos_neg(vertex_m + m_tilde)
    return abs(float((mh_pos - m_pos) @ lo - (mh_neg - m_neg) @ hi))


def _corner_subboxes(domain: Box):
    """The 3^n corner subintervals: per coordinate (lo,lo), (lo,hi) or
    (hi,hi).  The robust maximum of the piecewise-linear objective is
    attained on this set."""
    pairs = [
        [(domain.lo[j], domain.lo[j]), (domain.lo[j], domain.hi[j]), (domain.hi[j], domain.hi[j])]
        for j in range(domain.dim)
    ]
    for combo in product(*pairs):
        lo = np.array([p[0] for p in combo])
        hi = np.array([p[1] for p in combo])
        yield lo, hi


def robust_value(vertex: SlopeVertex, domain: Box, m_tilde) -> float:
    """Exact worst case of the robust objective over all subboxes
    (corner enumeration)."""
    m_tilde = np.atleast_1d(np.asarray(m_tilde, float))
    return max(
        _robust_value_on_box(vertex.m, m_tilde, lo, hi)
        for lo, hi in _corner_subboxes(domain)
    )


def brute_force_robust_value(
    vertex: SlopeVertex, domain: Box, m_tilde, samples: int, seed: int
) -> float:
    """Sampled lower bound on the robust objective (cannot overestimate
    a maximum); corner subintervals are always included, so it converges
    to the exact value."""
    if samples < 1:
        raise UsageError("samples must be >= 1")
    m_tilde = np.atleast_1d(np.asarray(m_tilde, float))
    best = max(
        _robust_value_on_box(vertex.m, m_tilde, lo, hi)
        for lo, hi in _corner_subboxes(domain)
    )
    for sub in sample_subintervals(domain, samples, seed):
        best = max(best, _robust_value_on_box(vertex.m, m_tilde, sub.lo, sub.hi))
    return best


def floor_slopes(vertex: SlopeVertex, domain: Box, floor=None) -> tuple[np.ndarray, float]:
    """Slope-floor variant: minimize the robust objective subject to
    |m_tilde_j| >= floor_j (default 0.1 |m_j|, 0.1 absolute when m_j = 0).

    Solved by sign-split search: on each orthant branch the objective is
    nondecreasing along rays away from the floor boundary, so candidates
    are scaled floor corners; a coarse ray search guards the claim.
    """
    n = domain.dim
    if floor is None:
        floor = np.where(vertex.m == 0.0, 0.1, 0.1 * np.abs(vertex.m))
    else:
        floor = np.broadcast_to(np.atleast_1d(np.asarray(floor, float)), (n,)).copy()
    if np.any(floor < 0):
        raise UsageError("slope floor must be nonnegative")
    best_val, best_m = np.inf, None
    for signs in product((-1.0, 1.0), repeat=n):
        base = np.array(signs) * floor
        for t in (1.0, 1.5, 2.0, 4.0, 8.0):
            cand = t * base
            val = robust_value(vertex, domain, cand)
            if val < best_val - 1e-12:
                best_val, best_m = val, cand
    return best_m, float(best_val)


def design_slopes(problem, vertices=None, slope_floor=None) -> list[SlopeDesignResult]:
    """Per-agent slope design via the LP as printed.

    ``vertices`` supplies the per-agent Jacobian vertex (defaults to the
    privacy-gap-minimizing vertex).  With ``slope_floor`` set, the
    trivial-solution exclusion is applied instead of the verbatim LP.
    """
    from .privacy import minimizing_decomposition  # local import: avoids cycle

    results = []
    for i, spec in enumerate(problem.objectives):
        vertex = (
            vertices[i]
            if vertices is not None
            else minimizing_decomposition(spec, np.zeros(spec.dim)).vertex
        )
        if slope_floor is None:
            res = solve_lp(build_lp(vertex, problem.domain))
            if res.solver_status != simplex.OPTIMAL:
                raise SolverError(
                    f"slope design failed for agent {i}: {res.solver_status}"
                )
            results.append(res)
        else:
            m_tilde, val = floor_slopes(vertex, problem.domain, slope_floor)
            results.append(
                SlopeDesignResult(
                    xi_star=None,
                    m_tilde_star=m_tilde,
                    objective_value=val,
                    solver_status=simplex.OPTIMAL,
                )
            )
    return results
