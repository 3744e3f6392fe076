import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import privperturb as pp
from privperturb.objectives import PolynomialObjective, poly_to_spec, sum_objective


def numpy_poly_oracle(terms_1d):
    """Independent 1-d evaluator via numpy.polynomial."""
    deg = max(e[0] for _, e in terms_1d)
    coeffs = np.zeros(deg + 1)
    for c, e in terms_1d:
        coeffs[e[0]] += c
    return np.polynomial.Polynomial(coeffs)


def test_trio_evaluation_matches_numpy_oracle(trio_problem):
    xs = np.linspace(-10, 10, 2001)
    for spec in trio_problem.objectives:
        oracle = numpy_poly_oracle(spec.poly.terms)
        assert np.allclose(spec.evaluate(xs[:, None]), oracle(xs), rtol=1e-12)
        assert np.allclose(
            spec.gradient(xs[:, None])[:, 0], oracle.deriv()(xs), rtol=1e-10, atol=1e-8
        )


def test_trio_jacobian_bounds(trio_problem):
    # frozen oracle: monomial-wise interval evaluation of each derivative
    # on [-10, 10], computed by hand from the derivative coefficients
    expected = [(-4352.0, 4888.0), (-2380.0, 2080.0), (-12.0, 288.0)]
    for spec, (lo, hi) in zip(trio_problem.objectives, expected):
        assert spec.jac_lo[0] == lo
        assert spec.jac_hi[0] == hi


def test_gradient_bounds_are_sound(trio_problem):
    xs = np.linspace(-10, 10, 4001)[:, None]
    for spec in trio_problem.objectives:
        g = spec.gradient(xs)[:, 0]
        assert np.all(g >= spec.jac_lo[0] - 1e-9)
        assert np.all(g <= spec.jac_hi[0] + 1e-9)


def test_sum_objective(trio_problem):
    total = sum_objective(trio_problem)
    xs = np.linspace(-10, 10, 501)[:, None]
    parts = sum(spec.evaluate(xs) for spec in trio_problem.objectives)
    assert np.allclose(total.evaluate(xs), parts, rtol=1e-12)
    # summed polynomial: 1.5x^4 + 2x^3 - 20x^2 - 44x - 16
    oracle = np.polynomial.Polynomial([-16.0, -44.0, -20.0, 0.0, 1.5])
    oracle += np.polynomial.Polynomial([0.0, 0.0, 0.0, 2.0])
    assert np.allclose(total.evaluate(xs), oracle(xs[:, 0]), rtol=1e-12)


def test_poly_algebra():
    box = pp.Box([-1.0], [1.0])
    p = PolynomialObjective(1, ((2.0, (2,)), (1.0, (0,))))
    q = PolynomialObjective.affine(np.array([3.0]), offset=-1.0)
    r = p + q
    xs = np.linspace(-1, 1, 11)[:, None]
    assert np.allclose(r.evaluate(xs), p.evaluate(xs) + q.evaluate(xs))
    assert np.allclose((p - p).evaluate(xs), 0.0)
    assert (p - p).terms == ()
    s = p * q
    assert np.allclose(s.evaluate(xs), p.evaluate(xs) * q.evaluate(xs))
    del box


def test_poly_json_roundtrip():
    p = PolynomialObjective(2, ((1.5, (2, 0)), (-3.0, (0, 1)), (0.25, (1, 1))))
    assert PolynomialObjective.from_json(p.to_json()).terms == p.terms


def test_value_bounds_sound_2d():
    p = PolynomialObjective(2, ((1.0, (2, 1)), (-2.0, (0, 2)), (0.5, (1, 0))))
    box = pp.Box([-2.0, -1.0], [1.0, 3.0])
    spec = poly_to_spec(p, box)
    rng = np.random.default_rng(7)
    pts = box.lo + rng.random((2000, 2)) * (box.hi - box.lo)
    g = spec.gradient(pts)
    assert np.all(g >= spec.jac_lo - 1e-9)
    assert np.all(g <= spec.jac_hi + 1e-9)


small_polys = st.lists(
    st.tuples(st.floats(-5, 5), st.integers(0, 4)), min_size=1, max_size=4
)


@settings(max_examples=50, deadline=None)
@given(small_polys)
def test_gradient_bounds_sound_property(terms):
    p = PolynomialObjective(1, tuple((c, (e,)) for c, e in terms))
    box = pp.Box([-3.0], [2.0])
    spec = poly_to_spec(p, box)
    xs = np.linspace(-3, 2, 301)[:, None]
    g = spec.gradient(xs)[:, 0]
    assert np.all(g >= spec.jac_lo[0] - 1e-6 * (1 + np.abs(g)))
    assert np.all(g <= spec.jac_hi[0] + 1e-6 * (1 + np.abs(g)))


def test_penalize_quadratic_penalty(trio_problem):
    box = trio_problem.domain
    spec = trio_problem.objectives[0]
    ineq = PolynomialObjective.affine(np.array([1.0]), offset=-5.0)  # x - 5 <= 0
    pen = pp.penalize(spec, ineq=[ineq], eq=[], weight=10.0)
    inside = np.array([[0.0]])
    outside = np.array([[7.0]])
    assert pen.evaluate(inside)[0] == pytest.approx(spec.evaluate(inside)[0])
    assert pen.evaluate(outside)[0] == pytest.approx(
        spec.evaluate(outside)[0] + 10.0 * (7.0 - 5.0) ** 2
    )
    assert box == pen.domain


def test_dimension_mismatch_errors():
    with pytest.raises(pp.DimensionMismatchError):
        PolynomialObjective(2, ((1.0, (1,)),))
    p = PolynomialObjective(1, ((1.0, (1,)),))
    with pytest.raises(pp.DimensionMismatchError):
        p.evaluate(np.zeros((3, 2)))
