import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import privperturb as pp
from privperturb.objectives import PolynomialObjective, poly_to_spec
from privperturb.privacy import check_adjacency


def oracle_eps(spec, slope, delta):
    """Independent recomputation: min over vertices of ln((C+2d)/C)/d,
    with C obtained from a dense grid of the remainder plus |m+slope|*width."""
    xs = np.linspace(spec.domain.lo[0], spec.domain.hi[0], 200_001)
    best = math.inf
    for m in (spec.jac_lo[0], spec.jac_hi[0]):
        hs = spec.evaluate(xs[:, None]) - m * xs
        width = (hs.max() - hs.min()) + abs(m + slope) * 20.0
        best = min(best, math.log((width + 2 * delta) / width) / delta)
    return best


def test_epsilon_gap_matches_grid_oracle(trio_problem, trio_slopes):
    for spec, slope in zip(trio_problem.objectives, trio_slopes):
        d = pp.delta_star(slope, spec.domain)
        eps, vertex = pp.epsilon_gap(spec, slope, d)
        assert eps == pytest.approx(oracle_eps(spec, float(slope[0]), d), rel=1e-6)
        # the argmin vertex maximizes the published width
        dec = pp.decompose(spec, vertex)
        w_star = pp.range_width(dec, spec.domain, slope)
        for v in pp.enumerate_vertices(spec):
            w = pp.range_width(pp.decompose(spec, v), spec.domain, slope)
            assert w <= w_star + 1e-9


def test_epsilon_values_frozen(trio_problem, trio_slopes):
    # frozen oracle values computed from the closed form
    expected = [1.0407148464687296e-05, 2.146090846269384e-05, 2.0467897136783512e-04]
    for spec, slope, e in zip(trio_problem.objectives, trio_slopes, expected):
        d = pp.delta_star(slope, spec.domain)
        eps, _ = pp.epsilon_gap(spec, slope, d)
        assert eps == pytest.approx(e, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 50.0), st.floats(1.01, 4.0))
def test_epsilon_strictly_decreasing_in_delta(delta, factor):
    fix = pp.nonconvex_trio()
    spec = fix.problem.objectives[2]
    slope = np.array([0.38])
    e1, _ = pp.epsilon_gap(spec, slope, delta)
    e2, _ = pp.epsilon_gap(spec, slope, delta * factor)
    assert e2 < e1


def test_epsilon_preconditions(trio_problem):
    spec = trio_problem.objectives[0]
    with pytest.raises(pp.PreconditionError):
        pp.epsilon_gap(spec, np.array([0.5]), 0.0)
    point = pp.Box([1.0], [1.0])
    s = poly_to_spec(PolynomialObjective(1, ((1.0, (2,)),)), point)
    with pytest.raises(pp.PreconditionError):
        pp.epsilon_gap(s, np.array([0.5]), 1.0)


def test_mechanism_validation(trio_problem, trio_slopes):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    assert np.allclose(mech.vicinity_radii, [5.2, 7.3, 3.8])
    with pytest.raises(pp.UsageError):
        pp.Mechanism(
            slopes=trio_slopes, vicinity_radii=np.zeros(3), domain=trio_problem.domain
        )
    with pytest.raises(pp.DimensionMismatchError):
        pp.Mechanism(
            slopes=trio_slopes, vicinity_radii=np.ones(2), domain=trio_problem.domain
        )


def test_apply_mechanism_sound(trio_problem, trio_slopes):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    out = pp.apply_mechanism(trio_problem, mech, trio_problem.domain)
    rng = np.random.default_rng(1)
    pts = -10 + 20 * rng.random((500, 1))
    for i, spec in enumerate(trio_problem.objectives):
        vals = spec.evaluate(pts) + trio_slopes[i, 0] * pts[:, 0]
        assert np.all(vals >= out.lo[i] - 1e-9)
        assert np.all(vals <= out.hi[i] + 1e-9)


def test_privacy_report_overall_is_max(trio_problem, trio_slopes):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    rep = pp.privacy_report(trio_problem, mech)
    assert rep.overall_eps == max(rep.per_agent_eps)
    assert len(rep.per_agent_eps) == 3


def perturb_one(problem, index, coeff):
    specs = list(problem.objectives)
    lin = PolynomialObjective.affine(np.array([coeff]), 0.0)
    specs[index] = poly_to_spec(specs[index].poly + lin, problem.domain)
    return pp.AgentProblem(objectives=tuple(specs))


def test_check_adjacency(trio_problem, trio_slopes):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    same = check_adjacency(trio_problem, trio_problem, mech)
    assert same.within and same.agent_index is None and same.sup_distance == 0.0

    one = perturb_one(trio_problem, 1, 0.1)
    cert = check_adjacency(trio_problem, one, mech)
    assert cert.agent_index == 1
    assert cert.sup_distance == pytest.approx(1.0, rel=1e-9)
    assert cert.within

    far = perturb_one(trio_problem, 1, 100.0)
    assert not check_adjacency(trio_problem, far, mech).within

    two = perturb_one(perturb_one(trio_problem, 0, 0.1), 1, 0.1)
    with pytest.raises(pp.AdjacencyError):
        check_adjacency(trio_problem, two, mech)


def test_verify_privacy_inequality(trio_problem, trio_slopes):
    mech = pp.Mechanism.from_slopes(trio_slopes, trio_problem.domain)
    base = pp.apply_mechanism(trio_problem, mech, trio_problem.domain)
    Fp = perturb_one(trio_problem, 2, 0.25)
    check = pp.verify_privacy_inequality(trio_problem, Fp, mech, base.inflate(1.0, 1.0))
    assert check.holds
    assert check.margin >= 0.0

    # witness not containing the mechanism output
    tiny = pp.IntervalVector(np.zeros(3), np.ones(3))
    with pytest.raises(pp.PreconditionError):
        pp.verify_privacy_inequality(trio_problem, Fp, mech, tiny)

    # out-of-vicinity perturbation
    far = perturb_one(trio_problem, 2, 50.0)
    with pytest.raises(pp.PreconditionError):
        pp.verify_privacy_inequality(trio_problem, far, mech, base.inflate(1.0, 1.0))
