import numpy as np
import pytest

import privperturb as pp
from privperturb.objectives import PolynomialObjective, poly_to_spec


def test_delta_star_exact(box1d):
    assert pp.delta_star(np.array([0.52]), box1d) == 5.2
    assert pp.delta_star(np.array([-0.52]), box1d) == 5.2
    assert pp.delta_star(np.zeros(1), box1d) == 0.0


def test_delta_star_mixed_sign_2d():
    box = pp.Box([-1.0, 0.0], [2.0, 4.0])
    m = np.array([1.0, -0.5])
    # hand oracle: max(|1*2 - 0.5*0|, |1*(-1) - 0.5*4|) = max(2, 3) = 3
    assert pp.delta_star(m, box) == pytest.approx(3.0)


def test_admissibility_literal(box1d):
    # |0.52| * 20 = 10.4 > 5.2: the literal test rejects the slope
    assert not pp.admissible_slope(np.array([0.52]), 5.2, box1d)
    assert pp.admissible_slope(np.array([0.2]), 5.2, box1d)


def test_upper_bound_positive_slopes(box1d, trio_slopes):
    # same-sign slopes: both variants allow y - z = -20
    assert pp.upper_bound(trio_slopes, box1d) == pytest.approx(20.0)
    assert pp.upper_bound_aggregate(trio_slopes, box1d) == pytest.approx(20.0)


def test_upper_bound_mixed_signs(box1d):
    mixed = np.array([[0.5], [-0.3], [0.1]])
    # per-agent rows of opposite sign force y = z
    assert pp.upper_bound(mixed, box1d) == pytest.approx(0.0, abs=1e-9)
    # the aggregate slope 0.3 only pins the direction
    assert pp.upper_bound_aggregate(mixed, box1d) == pytest.approx(20.0)


def test_upper_bound_2d():
    box = pp.Box([-1.0, -2.0], [1.0, 2.0])
    slopes = np.array([[1.0, 0.0]])
    # constraint only limits the first coordinate's sign; second is free
    assert pp.upper_bound(slopes, box) == pytest.approx(4.0)


def test_empirical_error_oracle():
    refs = [np.array([0.0]), np.array([1.0])]
    per = [np.array([0.5])]
    assert pp.empirical_error(refs, per) == pytest.approx(0.5)
    per2 = [np.array([3.0]), np.array([0.9])]
    # worst case over all pairs: |0 - 3| = 3
    assert pp.empirical_error(refs, per2) == pytest.approx(3.0)
    with pytest.raises(pp.UsageError):
        pp.empirical_error([], per)


def test_certify_trio_optimizer(trio_problem):
    refs, vals = pp.certify_reference_optimizers(trio_problem)
    assert len(refs) == 1
    assert abs(refs[0][0] - 2.62) <= 1e-2
    assert vals[0] == pytest.approx(-161.9189, abs=1e-3)


def test_certify_convex_quadratic():
    box = pp.Box([-5.0], [5.0])
    p = PolynomialObjective(1, ((1.0, (2,)), (-4.0, (1,))))  # min at x = 2
    spec = poly_to_spec(p, box)
    refs, _ = pp.certify_reference_optimizers(pp.AgentProblem((spec,)))
    assert len(refs) == 1
    assert refs[0][0] == pytest.approx(2.0, abs=1e-5)


def test_certify_two_global_minima():
    box = pp.Box([-3.0], [3.0])
    p = PolynomialObjective(1, ((1.0, (4,)), (-2.0, (2,))))  # minima at +-1
    spec = poly_to_spec(p, box)
    refs, _ = pp.certify_reference_optimizers(pp.AgentProblem((spec,)))
    found = sorted(float(r[0]) for r in refs)
    assert len(found) == 2
    assert found[0] == pytest.approx(-1.0, abs=1e-4)
    assert found[1] == pytest.approx(1.0, abs=1e-4)


def test_certify_2d_quadratic():
    box = pp.Box([-2.0, -2.0], [2.0, 2.0])
    p = PolynomialObjective(
        2, ((1.0, (2, 0)), (1.0, (0, 2)), (-2.0, (1, 0)), (1.0, (0, 1)))
    )  # min at (1, -0.5)
    spec = poly_to_spec(p, box)
    refs, _ = pp.certify_reference_optimizers(pp.AgentProblem((spec,)), grid_points=40_000)
    assert any(np.allclose(r, [1.0, -0.5], atol=1e-3) for r in refs)


def test_certify_capacity():
    box = pp.Box([-1.0] * 3, [1.0] * 3)
    terms = tuple((1.0, tuple(2 if j == k else 0 for j in range(3))) for k in range(3))
    spec = poly_to_spec(PolynomialObjective(3, terms), box)
    with pytest.raises(pp.CapacityError):
        pp.certify_reference_optimizers(pp.AgentProblem((spec,)))
