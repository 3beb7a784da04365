import math

import numpy as np
import pytest

from hausfock import (ConsistencyError, DomainError, Exp, ExpExp, Gaussian, LogPow, Power,
                      ValidationError, check_class_C, check_class_Wp,
                      derivative_identity_residual, weight_from_json)
from hausfock.fockspace import radial_mass

CATALOG = [Gaussian(1.0), Gaussian(0.3), Power(2.0), Power(3.0), LogPow(1.0, 1.0),
           LogPow(3.0, 1.0), LogPow(1.0, 2.0), Exp(1.0), Exp(2.0), ExpExp()]


def test_class_C_examples():
    assert check_class_C(Power(2.0)).in_class_C is True
    assert check_class_C(LogPow(1.0, 1.0)).in_class_C is False
    assert check_class_C(Exp(1.0)).in_class_C is True


@pytest.mark.parametrize("w", CATALOG, ids=lambda w: w.label())
def test_class_C_numeric_agrees_with_symbolic(w):
    rep = check_class_C(w)
    assert rep.numeric["C"] in (None, rep.in_class_C)
    samples = rep.diagnostics["log_r_dphi"]
    if rep.in_class_C:
        # expexp overflows to +inf already at r = 2^10
        assert samples[-1] == math.inf or samples[-1] > samples[0] + 1.0
    else:
        # r phi' stays bounded over the whole grid
        assert np.ptp(samples) < 1.0


def test_class_Wp_examples():
    for p in (0.25, 0.5, 1.0, 2.0, 7.0):
        assert check_class_Wp(Gaussian(1.0), p).in_class_Wp[p] is True
    for p in (0.5, 1.0, 2.0):
        assert check_class_Wp(LogPow(1.0, 1.0), p).in_class_Wp[p] is False
    assert check_class_Wp(LogPow(1.0, 1.0), 3.0).in_class_Wp[3.0] is True
    assert check_class_Wp(ExpExp(), [0.5, 1.0, 2.0]).in_class_Wp == {0.5: True, 1.0: True, 2.0: True}


@pytest.mark.parametrize("w", CATALOG, ids=lambda w: w.label())
@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 5.0])
def test_class_Wp_numeric_never_contradicts_symbolic(w, p):
    rep = check_class_Wp(w, p)
    assert rep.numeric[f"W_{p:g}"] in (None, rep.in_class_Wp[p])


def test_Wp_rejects_nonpositive_p():
    with pytest.raises(ValidationError):
        check_class_Wp(Gaussian(1.0), 0.0)


def test_disagreement_raises_consistency_error():
    class Liar(Power):
        def in_C(self):
            return False
    with pytest.raises(ConsistencyError):
        check_class_C(Liar(2.0))


@pytest.mark.parametrize("w,r", [(Gaussian(1.0), 2.0), (Power(3.0), 1.0), (Exp(2.0), 0.5)])
def test_derivative_identity_examples(w, r):
    assert derivative_identity_residual(w, r) < 1e-6


@pytest.mark.parametrize("w", CATALOG, ids=lambda w: w.label())
def test_derivative_identity_on_log_grid(w):
    hi = 3.0 if isinstance(w, ExpExp) else 30.0
    for r in np.geomspace(0.05, hi, 50):
        assert derivative_identity_residual(w, r) < 1e-6


def test_derivative_identity_domain():
    with pytest.raises(DomainError):
        derivative_identity_residual(Gaussian(1.0), 0.0)


def _doubling_converges(w, q, R_max=2.0 ** 120):
    R, prev = 1.0, radial_mass(w, q, 1.0)
    while R < R_max:
        R *= 2
        cur = radial_mass(w, q, R)
        if abs(cur - prev) / cur < 1e-10:
            return True
        prev = cur
    return False


@pytest.mark.parametrize("w", CATALOG, ids=lambda w: w.label())
@pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
def test_radial_integral_converges_under_cutoff_doubling(w, q):
    assert _doubling_converges(w, q) == w.admissible(0, q)


def test_gaussian_radial_integral_closed_form():
    # int_0^inf e^{-q alpha r^2 / 2} r dr = 1 / (q alpha)
    for alpha, q in ((1.0, 1.0), (1.0, 2.0), (0.5, 3.0)):
        assert radial_mass(Gaussian(alpha), q, 60.0) == pytest.approx(1 / (q * alpha), rel=1e-12)


def test_logpow_admissibility_threshold():
    w = LogPow(3.0, 1.0)
    # int r (1+r)^{-3q} dr converges iff 3q > 2
    assert w.admissible(0, 1.0)
    assert not LogPow(1.0, 1.0).admissible(0, 1.0)
    assert LogPow(1.0, 1.0).admissible(0, math.inf)


def test_weight_json_round_trip():
    for w in CATALOG:
        assert weight_from_json(w.to_json()) == w
    with pytest.raises(ValidationError):
        weight_from_json({"kind": "gaussian", "alpha": -1.0})
    with pytest.raises(ValidationError):
        weight_from_json({"kind": "nope"})
    with pytest.raises(ValidationError):
        weight_from_json({"kind": "power", "l": 2.0, "extra": 1})


def test_phi_positive_where_used():
    for w in CATALOG:
        r = np.geomspace(1e-3, 50, 200)
        assert np.all(np.asarray(w.phi(r)) >= 0)
        assert np.all(np.asarray(w.dphi(r)) > 0)
