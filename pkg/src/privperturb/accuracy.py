"""Accuracy side of the privacy/accuracy trade-off: the slope-induced
vicinity radius, the algorithm-independent worst-case error bound, and
the empirical error between true and perturbed minimizer sets.

Two variants of the error bound are exposed.  ``upper_bound`` solves
the maximization with one sign constraint per agent slope, as the bound
is usually stated; with slopes of mixed sign those constraints pin
y = z and the bound collapses to 0, which the accompanying proof does
not support (the necessary condition it establishes involves only the
*summed* slope).  ``upper_bound_aggregate`` uses that single summed-
slope constraint and is the variant whose dominance over the empirical
error is a theorem; the experiment harness asserts against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import simplex
from .errors import CapacityError, SolverError, UsageError
from .intervals import Box


def delta_star(m_tilde, domain: Box) -> float:
    """Vicinity radius induced by a slope:
    max(|m+ . hi - m- . lo|, |m+ . lo - m- . hi|)."""
    m = np.atleast_1d(np.asarray(m_tilde, float))
    pos = np.maximum(m, 0.0)
    neg = pos - m
    return float(
        max(abs(pos @ domain.hi - neg @ domain.lo), abs(pos @ domain.lo - neg @ domain.hi))
    )


def admissible_slope(m_tilde, delta_star_i: float, domain: Box) -> bool:
    """The literal admissibility test: sum_j |m_tilde_j| width_j <= delta*."""
    m = np.atleast_1d(np.asarray(m_tilde, float))
    return bool(np.abs(m) @ (domain.hi - domain.lo) <= delta_star_i)


def _solve_ub(constraint_rows: list[np.ndarray], domain: Box) -> float:
    """max ||y - z||_inf s.t. y, z in box and rows.(y, z) <= 0.

    The inf-norm maximum decomposes into one LP per signed coordinate:
    maximize +-(y_j - z_j), then take the largest optimum.
    """
    n = domain.dim
    nv = 2 * n  # variables (y, z), both free (the box rows bound them)
    free = np.ones(nv, bool)

    rows, rhs = [], []
    for j in range(n):  # box constraints on y and z
        for k in (j, n + j):
            r = np.zeros(nv)
            r[k] = 1.0
            rows.append(r)
            rhs.append(domain.hi[j])
            r = np.zeros(nv)
            r[k] = -1.0
            rows.append(r)
            rhs.append(-domain.lo[j])
    rows.extend(constraint_rows)
    rhs.extend([0.0] * len(constraint_rows))
    A, b = np.array(rows), np.array(rhs)

    best = 0.0
    for j in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(nv)
            c[j], c[n + j] = -sign, sign  # minimize -sign*(y_j - z_j)
            res = simplex.solve(c, A, b, free=free)
            if res.status != simplex.OPTIMAL:
                raise SolverError(f"error-bound LP ended with status {res.status}")
            best = max(best, float(-res.value))
    return best


def _slope_row(m: np.ndarray, n: int) -> np.ndarray:
    r = np.zeros(2 * n)
    r[:n] = m
    r[n:] = -m
    return r


def upper_bound(slopes, domain: Box) -> float:
    """Worst-case error bound with one constraint slope_i.(y - z) <= 0
    per agent (the bound as usually stated)."""
    slopes = np.atleast_2d(np.asarray(slopes, float))
    if slopes.size == 0:
        raise UsageError("need at least one slope")
    n = domain.dim
    rows = [_slope_row(m, n) for m in slopes]
    return _solve_ub(rows, domain)


def upper_bound_aggregate(slopes, domain: Box) -> float:
    """Worst-case error bound with the single summed-slope constraint
    (sum_i slope_i).(y - z) <= 0 — the form the proof supports."""
    slopes = np.atleast_2d(np.asarray(slopes, float))
    if slopes.size == 0:
        raise UsageError("need at least one slope")
    n = domain.dim
    return _solve_ub([_slope_row(slopes.sum(axis=0), n)], domain)


def empirical_error(reference, perturbed) -> float:
    """Worst-case inf-norm distance between the two minimizer sets."""
    ref = np.atleast_2d(np.asarray(list(reference), float))
    per = np.atleast_2d(np.asarray(list(perturbed), float))
    if ref.size == 0 or per.size == 0:
        raise UsageError("minimizer sets must be nonempty")
    diffs = np.abs(ref[:, None, :] - per[None, :, :])
    return float(np.max(np.max(diffs, axis=2)))


def _golden_refine(f, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Golden-section minimization on [lo, hi] (unimodal near a grid min)."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def certify_reference_optimizers(
    problem_or_spec,
    grid_points: int = 100_000,
    tol: float = 1e-3,
) -> tuple[list[np.ndarray], list[float]]:
    """Grid-certified minimizer set of the summed objective, with the
    objective value at each certified point.

    Grid search plus per-cluster golden-section refinement; keeps every
    grid point within ``tol`` of the grid minimum so genuinely
    multi-minimizer objectives report all their minimizers.  Limited to
    n <= 2 (grid certification does not scale past desk dimensions).
    """
    from .objectives import AgentProblem, sum_objective

    spec = (
        sum_objective(problem_or_spec)
        if isinstance(problem_or_spec, AgentProblem)
        else problem_or_spec
    )
    box = spec.domain
    n = box.dim
    if n > 2:
        raise CapacityError("grid certification supports n <= 2")

    if n == 1:
        xs = np.linspace(box.lo[0], box.hi[0], grid_points)
        vals = spec.evaluate(xs[:, None])
        vmin = np.min(vals)
        near = np.where(vals <= vmin + tol)[0]
        # cluster contiguous grid indices, refine each cluster
        clusters = np.split(near, np.where(np.diff(near) > 1)[0] + 1)
        step = xs[1] - xs[0]
        out = []
        for cl in clusters:
            lo = max(box.lo[0], xs[cl[0]] - step)
            hi = min(box.hi[0], xs[cl[-1]] + step)
            x_star = _golden_refine(lambda t: float(spec.evaluate(np.array([t]))), lo, hi, 1e-8)
            out.append(np.array([x_star]))
        return out, [float(spec.evaluate(x)) for x in out]

    side = max(2, int(round(grid_points ** 0.5)))
    g0 = np.linspace(box.lo[0], box.hi[0], side)
    g1 = np.linspace(box.lo[1], box.hi[1], side)
    X0, X1 = np.meshgrid(g0, g1, indexing="ij")
    pts = np.stack([X0, X1], axis=-1)
    vals = spec.evaluate(pts)
    vmin = np.min(vals)
    idx = np.argwhere(vals <= vmin + tol)
    # coordinate-wise golden refinement from each near-minimal cell
    out, seen = [], []
    step0, step1 = g0[1] - g0[0], g1[1] - g1[0]
    for i, j in idx:
        x = np.array([g0[i], g1[j]])
        for _ in range(4):
            x[0] = _golden_refine(
                lambda t: float(spec.evaluate(np.array([t, x[1]]))),
                max(box.lo[0], x[0] - step0),
                min(box.hi[0], x[0] + step0),
            )
            x[1] = _golden_refine(
                lambda t: float(spec.evaluate(np.array([x[0], t]))),
                max(box.lo[1], x[1] - step1),
                min(box.hi[1], x[1] + step1),
            )
        if not any(np.max(np.abs(x - s)) < 10 * max(step0, step1) for s in seen):
            seen.append(x.copy())
            out.append(x.copy())
    return out, [float(spec.evaluate(x)) for x in out]


@dataclass(frozen=True)
class AccuracyReport:
    delta_star: tuple[float, ...]
    ub: float
    ub_per_agent: float
    admissible: tuple[bool, ...]
    empirical_error: float | None = None
    reference_optimizers: tuple = ()
    perturbed_optimizers: tuple = ()

    def to_json(self) -> dict:
        return {
            "delta_star": list(self.delta_star),
            "ub": self.ub,
            "ub_per_agent": self.ub_per_agent,
            "admissible": list(self.admissible),
            "empirical_error": self.empirical_error,
            "reference_optimizers": [list(map(float, x)) for x in self.reference_optimizers],
            "perturbed_optimizers": [list(map(float, x)) for x in self.perturbed_optimizers],
        }
