"""Round-based multi-agent solvers over a mixing network.

Three representative distributed nonconvex methods consume a (possibly
perturbed) agent problem and emit iterate traces:

- ``dgd``: projected decentralized gradient descent,
- ``gradient_tracking``: DGD plus a per-agent gradient tracker,
- ``zeroth_order``: DGD with the two-point finite-difference estimator
  in place of the true gradient.

All three use the diminishing schedule alpha_k = a / (k + b), project
every iterate onto the domain box, and stop when the agents agree and
the projected-gradient mapping at the mean is small.  Multiple starts
of the same configuration run as one vectorized batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .intervals import Box, diameter
from .network import NetworkGraph
from .objectives import AgentProblem
from .privacy import Mechanism

DGD = "dgd"
GRADIENT_TRACKING = "gradient_tracking"
ZEROTH_ORDER = "zeroth_order"
ALGORITHMS = (DGD, GRADIENT_TRACKING, ZEROTH_ORDER)

CONVERGED = "converged"
MAX_ROUNDS = "max_rounds"
STEP_FAULT = "step_fault"


@dataclass(frozen=True)
class AlgorithmConfig:
    kind: str = DGD
    step_a: float | None = None  # default 0.01 * diam(domain)
    step_b: float = 10.0
    max_rounds: int = 20_000
    consensus_tol: float = 1e-4
    stationarity_tol: float = 1e-3
    seed: int = 0  # smoothing directions for the zeroth-order estimator

    def __post_init__(self):
        if self.kind not in ALGORITHMS:
            raise UsageError(f"unknown algorithm kind {self.kind!r}")
        if self.step_a is not None and self.step_a <= 0:
            raise UsageError("step_a must be positive")
        if self.step_b < 1 or self.max_rounds < 1:
            raise UsageError("need step_b >= 1 and max_rounds >= 1")


@dataclass(frozen=True)
class Trace:
    iterates: np.ndarray | None  # (rounds+1, N, n); None when not recorded
    final_point: np.ndarray  # (n,) consensus mean at termination
    rounds: int
    stopping_reason: str
    config: AlgorithmConfig = field(compare=False, default=None)


def _batch_values_grads(problem: AgentProblem, slopes: np.ndarray):
    """Evaluators over batched states x of shape (..., N, n).

    ``slopes`` is (N, n), or (S, N, n) for per-batch-element perturbations.
    """
    specs = problem.objectives

    def grads(x):
        return np.stack(
            [spec.gradient(x[..., i, :]) for i, spec in enumerate(specs)], axis=-2
        ) + slopes

    def values(x):
        lin = np.sum(x * slopes, axis=-1)
        return np.stack(
            [spec.evaluate(x[..., i, :]) for i, spec in enumerate(specs)], axis=-1
        ) + lin

    return grads, values


def _mech_slopes(problem: AgentProblem, mech: Mechanism | None) -> np.ndarray:
    return mech.slopes if mech is not None else np.zeros((problem.n_agents, problem.dim))


def _run_batch(
    problem: AgentProblem,
    mech: Mechanism | None,
    graph: NetworkGraph,
    cfg: AlgorithmConfig,
    starts: np.ndarray,  # (S, N, n)
    slope_batch: np.ndarray | None = None,  # (S, N, n) per-element slopes
    record_history: bool = True,
) -> list[Trace]:
    N, n = problem.n_agents, problem.dim
    if graph.node_count != N:
        raise UsageError("graph size != number of agents")
    box = problem.domain
    x = np.array(starts, float)
    S = x.shape[0]
    if x.shape != (S, N, n):
        raise UsageError("starts must have shape (S, N, n)")
    if np.any(x < box.lo) or np.any(x > box.hi):
        raise UsageError("starting points must lie in the domain box")

    W = graph.mixing
    diam = diameter(box)
    a = cfg.step_a if cfg.step_a is not None else 0.01 * diam
    slopes = slope_batch if slope_batch is not None else _mech_slopes(problem, mech)
    grads, values = _batch_values_grads(problem, slopes)
    rng = np.random.default_rng(cfg.seed)
    mu = 1e-4 * diam  # smoothing radius of the two-point estimator
    probe = 1e-3  # gradient-mapping probe step

    def estimate(x):
        if cfg.kind != ZEROTH_ORDER:
            return grads(x)
        u = rng.standard_normal((S, N, n))
        u /= np.maximum(np.linalg.norm(u, axis=-1, keepdims=True), 1e-12)
        fwd = values(x + mu * u)
        bwd = values(x - mu * u)
        return ((fwd - bwd) / (2.0 * mu))[..., None] * u

    history = [x.copy()] if record_history else None
    rounds_run = 0
    tracker = grads(x) if cfg.kind == GRADIENT_TRACKING else None
    grad_last = tracker.copy() if tracker is not None else None

    done = np.zeros(S, bool)
    faulted = np.zeros(S, bool)
    stop_round = np.full(S, -1, int)
    final = np.full((S, n), np.nan)

    for k in range(cfg.max_rounds):
        alpha = a / (k + cfg.step_b)
        mixed = np.einsum("ij,sjk->sik", W, x)
        direction = tracker if cfg.kind == GRADIENT_TRACKING else estimate(x)
        raw = mixed - alpha * direction
        fault_now = (
            np.any(raw < box.lo - 10.0 * diam, axis=(1, 2))
            | np.any(raw > box.hi + 10.0 * diam, axis=(1, 2))
        ) & ~done
        x_new = np.clip(raw, box.lo, box.hi)
        if cfg.kind == GRADIENT_TRACKING:
            grad_new = grads(x_new)
            tracker = np.einsum("ij,sjk->sik", W, tracker) + grad_new - grad_last
            grad_last = grad_new
        # frozen starts keep their terminal state
        x = np.where(done[:, None, None], x, x_new)
        if record_history:
            history.append(x.copy())
        rounds_run = k + 1

        mean = x.mean(axis=1)
        disagreement = np.max(np.abs(x - mean[:, None, :]), axis=(1, 2))
        candidates = ~done & (disagreement <= cfg.consensus_tol)
        if np.any(candidates):
            pts = np.repeat(mean[:, None, :], N, axis=1)
            g_mean = grads(pts).mean(axis=1)
            stepped = np.clip(mean - probe * g_mean, box.lo, box.hi)
            gm = np.max(np.abs(mean - stepped), axis=-1) / probe
            converged = candidates & (gm <= cfg.stationarity_tol)
        else:
            converged = np.zeros(S, bool)
        newly = converged | fault_now
        if np.any(newly):
            stop_round[newly] = k + 1
            final[newly] = mean[newly]
            faulted[newly & fault_now] = True
            done |= newly
        if np.all(done):
            break

    hist = np.array(history) if record_history else None
    out = []
    for s in range(S):
        if done[s]:
            r = int(stop_round[s])
            reason = STEP_FAULT if faulted[s] else CONVERGED
        else:
            r = rounds_run
            reason = MAX_ROUNDS
            final[s] = x[s].mean(axis=0)
        out.append(
            Trace(
                iterates=hist[: r + 1, s] if record_history else None,
                final_point=final[s],
                rounds=r,
                stopping_reason=reason,
                config=cfg,
            )
        )
    return out


def run(
    problem: AgentProblem,
    mech: Mechanism | None,
    graph: NetworkGraph,
    cfg: AlgorithmConfig,
    x0,
) -> Trace:
    """Run one solver from per-agent starting points x0 (N, n)."""
    N, n = problem.n_agents, problem.dim
    x0 = np.asarray(x0, float).reshape(-1, n)
    if x0.shape[0] == 1:
        x0 = np.broadcast_to(x0, (N, n))
    elif x0.shape[0] != N:
        raise UsageError(f"x0 must have 1 or {N} rows, got {x0.shape[0]}")
    return _run_batch(problem, mech, graph, cfg, x0[None])[0]


def default_starts(box: Box, count: int = 5) -> np.ndarray:
    """Deterministic spread of consensus starting points across the box."""
    fracs = (np.arange(count) + 0.5) / count
    return box.lo[None, :] + fracs[:, None] * (box.hi - box.lo)[None, :]


def terminal_points(
    problem: AgentProblem,
    mech: Mechanism | None,
    graph: NetworkGraph,
    cfg: AlgorithmConfig,
    starts=None,
    value_tol: float = 1e-3,
) -> tuple[list[np.ndarray], list[Trace]]:
    """Multi-start terminal points, filtered to near-minimal objective
    value among the batch.

    Terminal points stuck at strictly worse local minimizers are not
    argmin outputs of a convergent run, so they are dropped before
    feeding the worst-case error computation.
    """
    starts = default_starts(problem.domain) if starts is None else np.asarray(starts, float)
    S = starts.shape[0]
    N, n = problem.n_agents, problem.dim
    batch = np.broadcast_to(starts[:, None, :], (S, N, n))
    traces = _run_batch(problem, mech, graph, cfg, batch)
    _, values = _batch_values_grads(problem, _mech_slopes(problem, mech))
    finals = [t.final_point for t in traces]
    totals = [
        float(values(np.broadcast_to(p, (N, n))).sum()) for p in finals
    ]
    best = min(totals)
    keep = [
        p for p, v in zip(finals, totals) if v <= best + value_tol * (1.0 + abs(best))
    ]
    return keep, traces


def sweep_terminal_points(
    problem: AgentProblem,
    slope_sets: np.ndarray,  # (S, N, n) one slope matrix per sample
    graph: NetworkGraph,
    cfg: AlgorithmConfig,
    starts=None,
    value_tol: float = 1e-3,
) -> list[list[np.ndarray]]:
    """Value-filtered terminal points for many perturbations at once.

    All samples and starts run as a single vectorized batch (no iterate
    history), which is what makes large sweeps affordable.  Returns one
    list of near-minimal terminal points per sample.
    """
    slope_sets = np.asarray(slope_sets, float)
    S, N, n = slope_sets.shape
    if (N, n) != (problem.n_agents, problem.dim):
        raise UsageError("slope_sets must have shape (S, N, n)")
    starts = default_starts(problem.domain) if starts is None else np.asarray(starts, float)
    K = starts.shape[0]
    batch = np.broadcast_to(starts[None, :, None, :], (S, K, N, n)).reshape(S * K, N, n)
    slope_batch = np.repeat(slope_sets, K, axis=0)
    traces = _run_batch(
        problem, None, graph, cfg, batch, slope_batch=slope_batch, record_history=False
    )
    finals = np.stack([t.final_point for t in traces])  # (S*K, n)
    states = np.broadcast_to(finals[:, None, :], (S * K, N, n))
    _, values = _batch_values_grads(problem, slope_batch)
    totals = values(states).sum(axis=-1).reshape(S, K)
    out = []
    for s in range(S):
        best = float(np.min(totals[s]))
        cut = best + value_tol * (1.0 + abs(best))
        out.append(
            [finals[s * K + k] for k in range(K) if totals[s, k] <= cut]
        )
    return out
