import numpy as np
import pytest

import privperturb as pp
from privperturb import solvers


@pytest.fixture(scope="module")
def graph():
    return pp.complete_graph(3)


def consensus_start(x, N=3):
    return np.full((N, 1), x)


def test_each_algorithm_finds_global_min(trio_problem, graph):
    for kind in solvers.ALGORITHMS:
        cfg = pp.AlgorithmConfig(kind=kind)
        trace = pp.run(trio_problem, None, graph, cfg, consensus_start(8.0))
        assert trace.stopping_reason == solvers.CONVERGED
        assert trace.final_point[0] == pytest.approx(2.6174, abs=5e-3)
        assert trace.iterates.shape[0] == trace.rounds + 1


def test_dgd_can_stall_at_spurious_minimum(trio_problem, graph):
    # from a start deep in the left basin DGD terminates near the local
    # minimizer around -2.1, not the global one
    cfg = pp.AlgorithmConfig(kind=solvers.DGD, max_rounds=40_000)
    trace = pp.run(trio_problem, None, graph, cfg, consensus_start(-6.0))
    assert trace.final_point[0] < 0.0


def test_perturbation_shifts_minimizer(trio_problem, trio_slopes, graph):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    cfg = pp.AlgorithmConfig(kind=solvers.GRADIENT_TRACKING)
    clean = pp.run(trio_problem, None, graph, cfg, consensus_start(8.0))
    pert = pp.run(trio_problem, mech, graph, cfg, consensus_start(8.0))
    # total added slope is positive, so the perturbed minimizer moves left
    assert pert.final_point[0] < clean.final_point[0]


def test_divergence_guard(trio_problem, graph):
    cfg = pp.AlgorithmConfig(kind=solvers.DGD, step_a=1e6, step_b=1.0)
    trace = pp.run(trio_problem, None, graph, cfg, consensus_start(8.0))
    assert trace.stopping_reason == solvers.STEP_FAULT


def test_trace_determinism(trio_problem, graph):
    for kind in (solvers.DGD, solvers.ZEROTH_ORDER):
        cfg = pp.AlgorithmConfig(kind=kind, seed=3)
        t1 = pp.run(trio_problem, None, graph, cfg, consensus_start(4.0))
        t2 = pp.run(trio_problem, None, graph, cfg, consensus_start(4.0))
        assert np.array_equal(t1.iterates, t2.iterates)
        assert t1.rounds == t2.rounds


def test_default_starts(box1d):
    starts = pp.default_starts(box1d, count=5)
    assert starts.shape == (5, 1)
    assert np.allclose(starts[:, 0], [-8.0, -4.0, 0.0, 4.0, 8.0])


def test_terminal_points_filters_local_minima(trio_problem, graph):
    cfg = pp.AlgorithmConfig(kind=solvers.GRADIENT_TRACKING)
    kept, traces = pp.terminal_points(trio_problem, None, graph, cfg)
    assert len(traces) == 5
    assert len(kept) >= 1
    for point in kept:
        assert point[0] == pytest.approx(2.6174, abs=5e-3)


def test_sweep_matches_single_runs(trio_problem, trio_slopes, graph):
    cfg = pp.AlgorithmConfig(kind=solvers.DGD)
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    single, _ = pp.terminal_points(trio_problem, mech, graph, cfg)
    batched = solvers.sweep_terminal_points(
        trio_problem, trio_slopes[None], graph, cfg
    )
    assert len(batched) == 1
    got = sorted(float(p[0]) for p in batched[0])
    want = sorted(float(p[0]) for p in single)
    assert np.allclose(got, want, atol=1e-12)


def test_invalid_inputs(trio_problem, graph):
    with pytest.raises(pp.UsageError):
        pp.AlgorithmConfig(kind="newton")
    cfg = pp.AlgorithmConfig()
    with pytest.raises(pp.UsageError):
        pp.run(trio_problem, None, graph, cfg, consensus_start(99.0))  # outside box
    with pytest.raises(pp.UsageError):
        pp.run(trio_problem, None, pp.complete_graph(4), cfg, consensus_start(0.0, 4))
