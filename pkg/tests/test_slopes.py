import numpy as np
import pytest

import privperturb as pp
from privperturb.decomposition import SlopeVertex
from privperturb.slopes import brute_force_robust_value, robust_value


def vertex(m):
    m = np.atleast_1d(np.asarray(m, float))
    return SlopeVertex(m=m, choice_mask=np.zeros(m.size, int))


def test_lp_block_structure(box1d):
    lp = pp.build_lp(vertex([3.0]), box1d)
    n = 1
    assert lp.Gamma.shape == (3 * n, 2 * n + 1)
    assert lp.Lambda.shape == (2 * n + 1, 2 * n + 1)
    expect_gamma = np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    assert np.array_equal(lp.Gamma, expect_gamma)
    assert np.array_equal(lp.c, [0.0, 0.0, 1.0])
    assert np.array_equal(lp.d, [10.0, -10.0, 0.0])
    assert np.array_equal(lp.l, [3.0, 0.0, 0.0])  # m+ = 3, m- = 0
    text = lp.dump_text()
    assert text == pp.build_lp(vertex([3.0]), box1d).dump_text()
    assert "minimize c.xi" in text


def test_lp_trivial_optimum(trio_problem):
    for spec in trio_problem.objectives:
        for v in pp.enumerate_vertices(spec):
            res = pp.solve_lp(pp.build_lp(v, trio_problem.domain))
            assert res.solver_status == "optimal"
            assert res.objective_value == pytest.approx(0.0, abs=1e-9)
            assert np.allclose(res.m_tilde_star, 0.0, atol=1e-9)


def test_robust_value_oracle_agreement(box1d):
    rng = np.random.default_rng(2)
    for _ in range(10):
        v = vertex(rng.normal(scale=10.0))
        m_tilde = rng.normal(size=1)
        exact = robust_value(v, box1d, m_tilde)
        brute = brute_force_robust_value(v, box1d, m_tilde, samples=200, seed=4)
        # sampling cannot overestimate the max, corners make it exact here
        assert brute <= exact + 1e-12
        assert brute == pytest.approx(exact, rel=1e-9)


def test_robust_value_zero_slope(box1d):
    assert robust_value(vertex([5.0]), box1d, np.zeros(1)) == 0.0


def test_floor_slopes_respects_floor(box1d):
    v = vertex([4.0])
    m_tilde, val = pp.floor_slopes(v, box1d)
    assert abs(m_tilde[0]) >= 0.4 - 1e-12  # default floor 0.1 |m|
    assert val == pytest.approx(robust_value(v, box1d, m_tilde))
    # explicit floor
    m2, _ = pp.floor_slopes(v, box1d, floor=1.0)
    assert abs(m2[0]) >= 1.0 - 1e-12
    with pytest.raises(pp.UsageError):
        pp.floor_slopes(v, box1d, floor=-1.0)


def test_floor_slopes_2d():
    box = pp.Box([-2.0, -1.0], [2.0, 3.0])
    v = SlopeVertex(m=np.array([3.0, -5.0]), choice_mask=np.array([0, 0]))
    m_tilde, val = pp.floor_slopes(v, box)
    assert np.all(np.abs(m_tilde) >= 0.1 * np.abs(v.m) - 1e-12)
    # optimality among the sign corners at the floor
    for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        corner = np.array(signs) * 0.1 * np.abs(v.m)
        assert val <= robust_value(v, box, corner) + 1e-9


def test_design_slopes_variants(trio_problem):
    plain = pp.design_slopes(trio_problem)
    assert len(plain) == 3
    for r in plain:
        assert np.allclose(r.m_tilde_star, 0.0, atol=1e-9)
    floored = pp.design_slopes(trio_problem, slope_floor=0.5)
    for r in floored:
        assert abs(r.m_tilde_star[0]) >= 0.5 - 1e-12
