import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from hausfock import (Atom, DensityPiece, MeasureSpec, ValidationError, constant_density, delta,
                      flett, hardy, harmonic_mass, mass, moment, moment_table)
from hausfock.config import INF
from hausfock.harness import dominated_bound


# -- moment -------------------------------------------------------------------

def test_flett_moment_closed_form():
    assert moment(flett(2.0), 3) == pytest.approx(1 / 16, rel=1e-14)


def test_delta_one_moments_are_one():
    for n in (0, 1, 7, 300):
        assert moment(delta(1.0), n) == 1.0


def test_constant_on_1_2_zeroth_moment_is_log2():
    m = MeasureSpec([], [constant_density(1.0, 1.0, 2.0)])
    assert moment(m, 0) == pytest.approx(math.log(2), rel=1e-14)
    # independent oracle: composite Simpson on 10^4 + 1 nodes
    t = np.linspace(1.0, 2.0, 10_001)
    assert integrate.simpson(1.0 / t, x=t) == pytest.approx(moment(m, 0), rel=1e-13)


@pytest.mark.parametrize("piece", [
    DensityPiece("constant", 2.0, 1.0, 2.0),
    DensityPiece("constant", 0.5, 0.3, 4.0),
    DensityPiece("exp_decay", 1.5, 0.5, 6.0),
    DensityPiece("power_law", 2.5, 1.0, 3.0),
    DensityPiece("power_law", -1.0, 2.0, 5.0),
])
@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_closed_form_matches_scipy_quad_on_finite_intervals(piece, n):
    want, _ = integrate.quad(lambda t: t ** -(n + 1.0) * float(piece.density(t)), piece.a, piece.b,
                             epsabs=0, epsrel=1e-13)
    got = moment(MeasureSpec([], [piece]), n)
    assert got == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("piece", [
    DensityPiece("constant", 1.0, 1.0, 2.0),
    DensityPiece("exp_decay", 1.0, 1.0, INF),
    DensityPiece("power_law", 2.0, 1.0, INF),
    DensityPiece("flett_log", 0.5),
    DensityPiece("flett_log", 2.5),
])
@pytest.mark.parametrize("n", [0, 3, 30])
def test_closed_form_matches_internal_quadrature(piece, n):
    m = MeasureSpec([], [piece])
    assert moment(m, n, method="quadrature") == pytest.approx(moment(m, n), rel=1e-8)


def test_flett_moment_quadrature_against_gamma_function():
    # int_0^inf u^(g-1) e^(-(n+1)u) du / Gamma(g) = (n+1)^(-g)
    for g in (0.5, 1.0, 3.0):
        want = special.gamma(g) * 5.0 ** -g / special.gamma(g)
        assert moment(flett(g), 4, method="quadrature") == pytest.approx(want, rel=1e-10)


def test_divergent_moments_return_infinity():
    assert moment(MeasureSpec([], [constant_density(1.0, 0.0, 1.0)]), 0) == INF
    assert moment(MeasureSpec([], [DensityPiece("exp_decay", 1.0, 0.0, INF)]), 2) == INF
    assert harmonic_mass(MeasureSpec([], [constant_density(1.0, 1.0, INF)])) == INF


def test_negative_index_rejected():
    with pytest.raises(ValidationError):
        moment(hardy(), -1)


# -- validation ---------------------------------------------------------------

@pytest.mark.parametrize("bad", [
    lambda: Atom(0.0, 1.0),
    lambda: Atom(-1.0, 1.0),
    lambda: Atom(1.0, -0.1),
    lambda: DensityPiece("constant", 1.0, 2.0, 1.0),
    lambda: DensityPiece("constant", -1.0, 1.0, 2.0),
    lambda: DensityPiece("flett_log", 0.0),
    lambda: DensityPiece("flett_log", 1.0, 2.0, INF),
    lambda: DensityPiece("nope", 1.0),
    lambda: MeasureSpec([], [constant_density(1, 1, 3), constant_density(1, 2, 4)]),
])
def test_invalid_specs_raise(bad):
    with pytest.raises(ValidationError):
        bad()


def test_json_round_trip_and_unknown_fields():
    m = MeasureSpec([Atom(2.0, 0.5)], [DensityPiece("flett_log", 1.5),
                                       DensityPiece("constant", 2.0, 0.2, 0.9)])
    again = MeasureSpec.from_json(m.to_json())
    assert again == m
    assert again.dumps() == m.dumps()
    with pytest.raises(ValidationError):
        MeasureSpec.from_json({"atoms": [], "extra": 1})
    schema = MeasureSpec.from_json({"atoms": [{"t": 2.0, "w": 1.0}],
                                    "densities": [{"kind": "flett_log", "gamma": 1.0}]})
    assert schema.densities[0].a == 1.0 and schema.densities[0].b == INF


# -- mass and harmonic mass ---------------------------------------------------

def test_mass_examples():
    assert mass(delta(0.5, 3.0), "(0,1)") == 3.0
    assert mass(hardy(), "{1}") == 0.0
    m = MeasureSpec([Atom(1.0, 2.0)], [constant_density(1.0, 1.0, 3.0)])
    assert mass(m, "(0,1]") == 2.0
    assert mass(m, "(1,inf)") == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        mass(m, "[0,2]")


def test_harmonic_mass_examples():
    assert harmonic_mass(delta(2.0)) == 0.5
    assert harmonic_mass(hardy()) == pytest.approx(1.0, rel=1e-15)
    assert harmonic_mass(MeasureSpec()) == 0.0


def test_harmonic_mass_is_zeroth_moment_when_no_mass_below_one():
    m = MeasureSpec([Atom(3.0, 1.0)], [constant_density(1.0, 1.0, 2.0)])
    assert harmonic_mass(m) == pytest.approx(moment(m, 0), rel=1e-15)


# -- moment table -------------------------------------------------------------

def test_moment_table_examples():
    np.testing.assert_allclose(moment_table(delta(2.0), 2).values, [0.5, 0.25, 0.125], rtol=1e-15)
    np.testing.assert_allclose(moment_table(hardy(), 2).values, [1, 1 / 2, 1 / 3], rtol=1e-14)
    assert moment_table(hardy(), 2).exact.all()


def test_delta1_plus_constant_on_1_2_converges_slowly_to_one():
    m = MeasureSpec([Atom(1.0, 1.0)], [constant_density(1.0, 1.0, 2.0)])
    mu = moment_table(m, 200).values
    # mu_n - 1 = (1 - 2^-n) / n: tends to 0 only like 1/n
    n = np.arange(1, 201)
    np.testing.assert_allclose(mu[1:] - 1.0, (1 - 2.0 ** -n) / n, rtol=1e-12, atol=1e-15)
    assert mu[200] - 1.0 < dominated_bound(m, 200, harmonic_mass(m))


def test_atoms_below_one_make_moments_grow():
    mu = moment_table(delta(0.5, 2.0), 5).values
    np.testing.assert_allclose(mu, 2.0 * 2.0 ** (np.arange(6) + 1))


measures_above_one = st.builds(
    lambda atoms, c, a, width: MeasureSpec(
        [Atom(t, w) for t, w in atoms], [constant_density(c, a, a + width)] if c > 0 else []),
    st.lists(st.tuples(st.floats(1.0, 50.0), st.floats(0.0, 5.0)), max_size=4),
    st.floats(0.0, 3.0), st.floats(1.0, 10.0), st.floats(0.1, 5.0),
)


@given(measures_above_one)
def test_moments_nonincreasing_when_support_above_one(m):
    mu = moment_table(m, 40).values
    assert np.all(np.diff(mu) <= 1e-12 * max(mu[0], 1e-300))


@given(measures_above_one)
def test_roots_nondecreasing_for_subprobability_harmonic_measure(m):
    mu0 = moment(m, 0)
    if mu0 > 1:
        m = MeasureSpec([Atom(a.t, a.w / mu0) for a in m.atoms],
                        [constant_density(d.param / mu0, d.a, d.b) for d in m.densities])
    roots = moment_table(m, 40).roots()[1:]
    roots = roots[np.isfinite(roots) & (roots > 0)]
    assert np.all(np.diff(roots) >= -1e-9)


def test_roots_can_decrease_when_harmonic_mass_exceeds_one():
    m = MeasureSpec([Atom(1.0, 1.0)], [constant_density(1.0, 2.0, 3.0)])
    r = moment_table(m, 3).roots()
    assert r[1] == pytest.approx(1 + 0.5 - 1 / 3)
    assert r[2] < r[1]


@given(measures_above_one, st.integers(20, 300))
def test_moments_approach_mass_at_one_within_dominated_bound(m, N):
    gap = abs(moment(m, N) - mass(m, "{1}"))
    assert gap <= dominated_bound(m, N, harmonic_mass(m)) * (1 + 1e-12) + 1e-15
