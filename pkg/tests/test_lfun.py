import math
from fractions import Fraction

import mpmath
import pytest

from modmahler.eis import E3Spec, char_by_label, newform_coeffs, trivial_char
from modmahler.lfun import (ClosedFormValue, EisensteinPoleError, fricke_sign, lambda_cusp, lambda_cusp_quad,
                            lambda_eis, lambda_eis_reg, zeta_prime_minus2)

ZETA3_PI2 = float(mpmath.zeta(3) / mpmath.pi ** 2)


@pytest.mark.parametrize("label", ["f8", "f12", "f16"])
def test_fricke_sign_is_plus(label):
    eps, ratios = fricke_sign(newform_coeffs(label))
    assert eps == 1
    assert all(abs(r - 1) < 1e-9 for r in ratios)


@pytest.mark.parametrize("label", ["f8", "f12", "f16"])
def test_series_against_quadrature(label):
    f = newform_coeffs(label)
    for s in (1.1, 3.0):
        assert abs(lambda_cusp(f, s) - lambda_cusp_quad(f, s)) < 1e-10


def test_known_value_f8():
    f = newform_coeffs("f8")
    assert abs(4 * lambda_cusp(f, 3) - 0.5412739816935) < 1e-11


def test_precision_needs_enough_coefficients():
    with pytest.raises(ValueError):
        lambda_cusp(newform_coeffs("f8", 5), 3, eps=1)


def test_eisenstein_symbolic_chi4():
    v = lambda_eis_reg([(1, E3Spec(char_by_label("chi4"), trivial_char(), 1))])
    assert v.exact == {"zeta3/pi2": Fraction(-1, 4)}
    assert v.other == 0
    assert abs(v.value() + ZETA3_PI2 / 4) < 1e-15
    assert v.certificate < 1e-12


def test_eisenstein_log_term():
    # 2 E3^{1,chi4} - 2 E3^{1,chi4,2} regularises to log 2
    combo = [(2, E3Spec(trivial_char(), char_by_label("chi4"), 1)),
             (-2, E3Spec(trivial_char(), char_by_label("chi4"), 2))]
    v = lambda_eis_reg(combo)
    assert abs(v.value() - math.log(2)) < 1e-12
    assert v.certificate < 1e-10


def test_eisenstein_pole_detected():
    with pytest.raises(EisensteinPoleError):
        lambda_eis_reg([(1, E3Spec(trivial_char(), char_by_label("chi4"), 1))])


def test_eisenstein_away_from_zero():
    sp = E3Spec(char_by_label("chi4"), trivial_char(), 1)
    v = lambda_eis(sp, 1.5, N=1)
    A = 2 * mpmath.dirichlet(1.5, [0, 1, 0, -1]) * mpmath.zeta(-0.5) * (1 / (2 * mpmath.pi)) ** 1.5
    assert abs(v - float(mpmath.gamma(1.5) * A)) < 1e-12


def test_zeta_prime():
    assert abs(zeta_prime_minus2() + float(mpmath.zeta(3)) / (4 * math.pi ** 2)) < 1e-14


def test_closed_form_str():
    assert "zeta3/pi2" in str(ClosedFormValue({"zeta3/pi2": 7}))
