"""Experiment harness: configuration, slope sampling, and privacy/accuracy
sweeps over a fixture problem.

A sweep draws perturbation-slope matrices around a design point, and for
each draw records the privacy level, the worst-case error upper bound,
and the empirical worst-case error of each solver.  The bound must
dominate every empirical error; a violation aborts the sweep.

Sweep CSV columns: sample, eps, ub, err_dgd, err_tracking, err_zo,
mtilde_1..mtilde_N (one slope column per agent per coordinate), with
rows sorted by eps ascending.  Output bytes are deterministic for a
fixed config.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import accuracy, privacy, slopes as slope_design, solvers
from .errors import TheoremViolationError, UsageError
from .fixtures import Fixture, fixture_from_json, load_fixture
from .network import complete_graph
from .objectives import AgentProblem, sum_objective

ERR_COLUMNS = {
    solvers.DGD: "err_dgd",
    solvers.GRADIENT_TRACKING: "err_tracking",
    solvers.ZEROTH_ORDER: "err_zo",
}


@dataclass(frozen=True)
class ExperimentConfig:
    fixture: str = "nonconvex_trio"
    slopes: np.ndarray | None = None  # (N, n) design point; None = fixture/LP
    radii: np.ndarray | None = None  # (N,) vicinity radii; None = delta_star
    slope_floor: float | None = None  # used when the design point is computed
    sample_count: int = 50
    sigma: float = 1.0
    seed: int = 0
    algorithms: tuple[str, ...] = solvers.ALGORITHMS
    solver: solvers.AlgorithmConfig = field(default_factory=solvers.AlgorithmConfig)

    def __post_init__(self):
        if self.sample_count < 1:
            raise UsageError("sample_count must be >= 1")
        if self.sigma < 0:
            raise UsageError("sigma must be nonnegative")
        bad = [a for a in self.algorithms if a not in solvers.ALGORITHMS]
        if bad:
            raise UsageError(f"unknown algorithms: {bad}")


def config_from_json(doc: dict) -> tuple[ExperimentConfig, Fixture]:
    """Parse a config document; the fixture may be inline or referenced."""
    fix_field = doc.get("fixture", "nonconvex_trio")
    if isinstance(fix_field, dict):
        fixture = fixture_from_json(fix_field)
    else:
        fixture = load_fixture(str(fix_field))
    mech = doc.get("mechanism", {})
    sampling = doc.get("sampling", {})
    solver_doc = doc.get("solver", {})
    slopes = mech.get("slopes")
    radii = mech.get("radii")
    try:
        cfg = ExperimentConfig(
            fixture=fixture.name,
            slopes=None if slopes is None else np.asarray(slopes, float),
            radii=None if radii is None else np.asarray(radii, float),
            slope_floor=mech.get("slope_floor"),
            sample_count=int(sampling.get("sample_count", 50)),
            sigma=float(sampling.get("sigma", 1.0)),
            seed=int(sampling.get("seed", 0)),
            algorithms=tuple(doc.get("algorithms", solvers.ALGORITHMS)),
            solver=solvers.AlgorithmConfig(
                kind=solvers.DGD,
                step_a=solver_doc.get("step_a"),
                step_b=float(solver_doc.get("step_b", 10.0)),
                max_rounds=int(solver_doc.get("max_rounds", 20_000)),
                consensus_tol=float(solver_doc.get("consensus_tol", 1e-4)),
                stationarity_tol=float(solver_doc.get("stationarity_tol", 1e-3)),
                seed=int(solver_doc.get("solver_seed", 0)),
            ),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed config: {exc}") from exc
    return cfg, fixture


def load_config(path: str) -> tuple[ExperimentConfig, Fixture]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config document must be a JSON object")
    return config_from_json(doc)


def design_point(cfg: ExperimentConfig, fixture: Fixture) -> np.ndarray:
    """Slope matrix that sampling is centered on: explicit config value,
    else the fixture's reference slopes, else the slope-design program."""
    if cfg.slopes is not None:
        N, n = fixture.problem.n_agents, fixture.problem.dim
        if cfg.slopes.shape != (N, n):
            raise UsageError("config slopes must have shape (N, n)")
        return cfg.slopes
    if fixture.reference_slopes is not None:
        return fixture.reference_slopes
    results = slope_design.design_slopes(
        fixture.problem, slope_floor=cfg.slope_floor
    )
    return np.stack([r.m_tilde_star for r in results])


def sample_slopes(center: np.ndarray, count: int, sigma: float, seed: int) -> np.ndarray:
    """Draw `count` slope matrices from independent normals centered on
    the design point, via the Box-Muller transform on a seeded uniform
    stream (explicit so the byte-level output is pinned to the seed)."""
    center = np.asarray(center, float)
    k = center.size
    pairs = (count * k + 1) // 2
    rng = np.random.default_rng(seed)
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    r = np.sqrt(-2.0 * np.log1p(-u1))  # u in [0,1) -> 1-u in (0,1]
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    z = z[: count * k].reshape((count,) + center.shape)
    return center[None] + sigma * z


@dataclass(frozen=True)
class SweepRow:
    sample: int
    eps: float
    ub: float
    errors: dict  # algorithm kind -> empirical worst-case error
    m_tilde: np.ndarray  # (N, n)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple  # SweepRow, sorted by eps ascending
    reference_optimizers: tuple  # certified minimizers of the clean sum
    algorithms: tuple

    def csv_header(self) -> str:
        N, n = self.rows[0].m_tilde.shape
        cols = ["sample", "eps", "ub"]
        cols += [ERR_COLUMNS[a] for a in self.algorithms]
        if n == 1:
            cols += [f"mtilde_{i + 1}" for i in range(N)]
        else:
            cols += [f"mtilde_{i + 1}_{j + 1}" for i in range(N) for j in range(n)]
        return ",".join(cols)

    def to_csv(self) -> str:
        lines = [self.csv_header()]
        for row in self.rows:
            cells = [str(row.sample), repr(row.eps), repr(row.ub)]
            cells += [repr(row.errors[a]) for a in self.algorithms]
            cells += [repr(float(v)) for v in row.m_tilde.ravel()]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _check_necessary_condition(m_tilde, refs, perturbed, tol=1e-6):
    """Minimizer-shift direction check: the total added slope must be
    nonincreasing from the clean minimizer toward the perturbed one."""
    total = np.sum(m_tilde, axis=0)
    for x_star in refs:
        for x_pert in perturbed:
            val = float(total @ (np.asarray(x_pert) - np.asarray(x_star)))
            if val > tol:
                raise TheoremViolationError(
                    "minimizer-shift direction violated: "
                    f"m_tilde_total @ (x_pert - x_star) = {val:.3e} > 0"
                )


def run_sweep(
    cfg: ExperimentConfig,
    fixture: Fixture,
    check_direction: bool = False,
) -> SweepResult:
    """Execute the full sampling sweep.

    Raises TheoremViolationError if any empirical error exceeds the
    error upper bound (or, when enabled, if a perturbed minimizer moves
    against the total-slope direction).
    """
    problem = fixture.problem
    domain = problem.domain
    graph = complete_graph(problem.n_agents)
    refs, _ = accuracy.certify_reference_optimizers(problem)
    center = design_point(cfg, fixture)
    draws = sample_slopes(center, cfg.sample_count, cfg.sigma, cfg.seed)

    eps_list, ub_list = [], []
    for s in range(cfg.sample_count):
        m_tilde = draws[s]
        per_eps = []
        for i, spec in enumerate(problem.objectives):
            delta = accuracy.delta_star(m_tilde[i], domain)
            eps_i, _ = privacy.epsilon_gap(spec, m_tilde[i], delta)
            per_eps.append(eps_i)
        eps_list.append(float(max(per_eps)))
        ub_list.append(float(accuracy.upper_bound_aggregate(m_tilde, domain)))

    per_algo = {}
    for kind in cfg.algorithms:
        acfg = solvers.AlgorithmConfig(
            kind=kind,
            step_a=cfg.solver.step_a,
            step_b=cfg.solver.step_b,
            max_rounds=cfg.solver.max_rounds,
            consensus_tol=cfg.solver.consensus_tol,
            stationarity_tol=cfg.solver.stationarity_tol,
            seed=cfg.solver.seed,
        )
        per_algo[kind] = solvers.sweep_terminal_points(problem, draws, graph, acfg)

    rows = []
    for s in range(cfg.sample_count):
        errors = {}
        for kind in cfg.algorithms:
            perturbed = per_algo[kind][s]
            err = accuracy.empirical_error(refs, perturbed)
            if err > ub_list[s] + 1e-9 * max(1.0, ub_list[s]):
                raise TheoremViolationError(
                    f"sample {s}, {kind}: empirical error {err!r} exceeds "
                    f"upper bound {ub_list[s]!r}"
                )
            if check_direction:
                _check_necessary_condition(draws[s], refs, perturbed)
            errors[kind] = err
        rows.append(
            SweepRow(
                sample=s, eps=eps_list[s], ub=ub_list[s], errors=errors, m_tilde=draws[s]
            )
        )

    rows.sort(key=lambda r: (r.eps, r.sample))
    return SweepResult(
        rows=tuple(rows),
        reference_optimizers=tuple(map(tuple, refs)),
        algorithms=tuple(cfg.algorithms),
    )


def clean_problem_summary(problem: AgentProblem) -> dict:
    """Reference data about the unperturbed problem (for reports)."""
    refs, vals = accuracy.certify_reference_optimizers(problem)
    total = sum_objective(problem)
    return {
        "optimizers": [list(map(float, r)) for r in refs],
        "values": [float(v) for v in vals],
        "dim": total.dim,
        "agents": problem.n_agents,
    }
