import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hausfock import DomainError, QuadConfig, TaylorPoly, ValidationError, circle_mean, dilate, evaluate
from hausfock.config import INF
from hausfock.entire import log_circle_means

from conftest import random_poly


def test_evaluate_examples():
    assert evaluate(TaylorPoly([1, 1]), 1j) == pytest.approx(1 + 1j)
    assert evaluate(TaylorPoly([0, 0, 1]), 2) == pytest.approx(4)
    exp10 = TaylorPoly([1 / math.factorial(n) for n in range(11)])
    assert abs(evaluate(exp10, 1.0) - math.e) < 3e-8


def test_dilate_examples(rng):
    assert dilate(TaylorPoly([0, 0, 1]), 2.0).allclose(TaylorPoly([0, 0, 0.25]))
    f = random_poly(rng, 12)
    assert dilate(f, 1.0) == f
    assert dilate(TaylorPoly([1, 1]), 4.0).allclose(TaylorPoly([1, 0.25]))
    for t in (0.0, -1.0):
        with pytest.raises(DomainError):
            dilate(f, t)


def test_arithmetic_is_coefficientwise():
    a = TaylorPoly([1, 2j, 3])
    b = TaylorPoly([1, 1])
    assert (a + b) == TaylorPoly([2, 1 + 2j, 3])
    assert (a - a).is_zero()
    assert (2 * a) == TaylorPoly([2, 4j, 6])
    assert (a / 2) == TaylorPoly([0.5, 1j, 1.5])
    assert -a == TaylorPoly([-1, -2j, -3])
    # trailing zeros are representation only
    assert TaylorPoly([1, 0, 0]) == TaylorPoly([1])
    assert TaylorPoly([1, 0, 0]).N == 2 and TaylorPoly([1, 0, 0]).degree == 0
    assert hash(TaylorPoly([1, 0])) == hash(TaylorPoly([1]))
    assert TaylorPoly.zero(3).degree == -1


def test_coefficients_are_read_only():
    f = TaylorPoly([1, 2])
    with pytest.raises(ValueError):
        f.coeffs[0] = 5


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValidationError):
        TaylorPoly([1, float("nan")])


def test_json_round_trip(rng):
    f = random_poly(rng, 7)
    assert TaylorPoly.from_json(f.to_json()) == f
    assert TaylorPoly.from_json([0, 1, 2.5]) == TaylorPoly([0, 1, 2.5])
    with pytest.raises(ValidationError):
        TaylorPoly.from_json({"coeffs": [[1, 2, 3]]})


# -- circle means -------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 5, 30])
@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_monomial_max_modulus(n, r):
    assert circle_mean(TaylorPoly.monomial(n), INF, r).value == pytest.approx(r ** n, rel=1e-14)


def test_circle_mean_examples():
    assert circle_mean(TaylorPoly([1, 1]), 2, 1.0).value == pytest.approx(math.sqrt(2), rel=1e-15)
    assert circle_mean(TaylorPoly([0, 1]), 1, 3.0).value == pytest.approx(3.0, rel=1e-15)


def test_max_modulus_of_one_plus_z():
    # |1 + r e^{i theta}| peaks at theta = 0
    for r in (0.3, 1.0, 2.5):
        cm = circle_mean(TaylorPoly([1, 1]), INF, r)
        assert cm.value == pytest.approx(1 + r, rel=1e-12)
        assert cm.method == "max-sample"


def test_max_modulus_off_grid_peak():
    # peak at theta = 0.1234, not a sample point
    phase = np.exp(-1j * 0.1234)
    f = TaylorPoly([1, phase, phase ** 2])
    assert circle_mean(f, INF, 1.0).value == pytest.approx(3.0, rel=1e-12)


def test_validation_and_domain():
    f = TaylorPoly([1, 1])
    with pytest.raises(ValidationError):
        circle_mean(f, 0.5, 1.0)
    with pytest.raises(DomainError):
        circle_mean(f, 2, -1.0)


@pytest.mark.parametrize("degree", [1, 10, 25, 50])
def test_parseval_matches_trapezoid(rng, degree):
    f = random_poly(rng, degree)
    for r in (0.5, 1.0, 1.7):
        a = circle_mean(f, 2, r).value
        b = circle_mean(f, 2, r, method="quadrature").value
        assert a == pytest.approx(b, rel=1e-10)
        exact = math.sqrt(sum(abs(c) ** 2 * r ** (2 * n) for n, c in enumerate(f.coeffs)))
        assert a == pytest.approx(exact, rel=1e-12)


def test_general_p_against_scipy_quad(rng):
    from scipy.integrate import quad
    f = random_poly(rng, 6)
    for p in (1.0, 3.0):
        want = (quad(lambda th: abs(evaluate(f, 1.3 * np.exp(1j * th))) ** p, 0, 2 * np.pi,
                     limit=400, epsabs=0, epsrel=1e-12)[0] / (2 * np.pi)) ** (1 / p)
        # |f| has kinks only where f vanishes on the circle; tolerance allows for that
        assert circle_mean(f, p, 1.3).value == pytest.approx(want, rel=1e-6)


def test_large_degree_does_not_overflow():
    f = TaylorPoly.monomial(400, 1.0) + TaylorPoly.monomial(3, 1.0)
    logv, _ = log_circle_means(f, 2, [20.0])
    assert logv[0] == pytest.approx(400 * math.log(20.0), rel=1e-14)
    assert circle_mean(f, 2, 20.0).value == INF


def test_theta_count_follows_config():
    cfg = QuadConfig(theta_nodes=64)
    f = TaylorPoly([1, 1, 1])
    # r = 0.5 keeps the zeros of f off the circle, so both node counts are spectrally accurate
    assert circle_mean(f, 3.0, 0.5, cfg).value == pytest.approx(circle_mean(f, 3.0, 0.5).value, rel=1e-12)


poly_degrees = st.integers(0, 20)
seeds = st.integers(0, 2 ** 32 - 1)
exponents = st.sampled_from([1.0, 1.5, 2.0, 4.0, INF])


@given(seeds, poly_degrees, exponents)
def test_circle_mean_nondecreasing_in_r(seed, degree, p):
    f = random_poly(np.random.default_rng(seed), degree)
    vals = [circle_mean(f, p, r).value for r in np.linspace(0.0, 3.0, 25)]
    assert all(b >= a * (1 - 1e-10) for a, b in zip(vals, vals[1:]))


@given(seeds, poly_degrees, st.floats(0.1, 3.0))
def test_holder_ordering(seed, degree, r):
    f = random_poly(np.random.default_rng(seed), degree)
    vals = [circle_mean(f, p, r).value for p in (1.0, 2.0, 3.0, INF)]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(vals, vals[1:]))


@given(seeds, poly_degrees, exponents, st.floats(1.0, 10.0), st.floats(0.1, 3.0))
def test_dilation_contracts_circle_means(seed, degree, p, t, r):
    f = random_poly(np.random.default_rng(seed), degree)
    assert circle_mean(dilate(f, t), p, r).value <= circle_mean(f, p, r).value * (1 + 1e-10)
