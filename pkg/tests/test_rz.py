from fractions import Fraction

import pytest

from modmahler.eis import newform_coeffs
from modmahler.exactq import QSeries
from modmahler.modsym import PhiCombo, Y, manin_decompose, phi_pullback
from modmahler.rz import (NotIdentifiedError, RZProduct, UnbalancedError, expand_and_identify, gamma1_index,
                          level_degeneracy_pullback, phi_to_F, rescale_down, sturm_bound, support_gcd)


def p2_phi():
    c = Fraction(8 * 64, 3)
    return phi_pullback([(c, (0, 3), (0, 2)), (-c, (0, 1), (0, 2))], manin_decompose(Y, "1/2", "oo"), 8)


def ten_term_F():
    return RZProduct(8, [(1, (4, 3), (2, -2)), (-1, (4, -3), (2, 2)), (-1, (4, 1), (6, -2)), (1, (4, -1), (6, 2)),
                         (2, (6, 2), (5, -4)), (-2, (6, -2), (5, 4)), (-2, (6, 6), (7, -4)), (2, (6, -6), (7, 4)),
                         (-1, (0, 3), (0, -2)), (1, (0, 1), (0, -2)), (1, (0, -3), (0, 2)), (-1, (0, -1), (0, 2))])


def test_phi_to_F_matches_explicit_product():
    F = phi_to_F(p2_phi().scale(Fraction(3, 512)))
    assert F == ten_term_F()


def test_normalisation_symmetry():
    a = RZProduct(8, [(1, (4, 3), (2, -2))])
    b = RZProduct(8, [(-1, (4, 5), (6, 2))])  # G2_{-i} = G2_i, G1_{-i} = -G1_i
    assert a == b
    assert RZProduct(8, [(1, (1, 2), (4, 4))]).normalized() == {}  # G1_i with i = -i vanishes


def test_unbalanced_family_rejected():
    with pytest.raises(UnbalancedError):
        phi_to_F(PhiCombo.from_list(8, [(1, (3, 0), (2, 0))]))


def test_identification_P2():
    ident = expand_and_identify(ten_term_F(), 8)
    assert ident.rescale == 8
    assert ident.cusp == {"f8": 4} and not ident.eis
    assert ident.constant_consistent and ident.unique
    assert ident.coefficients_used >= sturm_bound(8, margin=0)


def test_support_and_rescale():
    s = ten_term_F().qexp(200)
    assert support_gcd(s) == 8
    g = rescale_down(s, 8, 20)
    f = newform_coeffs("f8")
    assert all(g.coeff(n) == 4 * f.a(n) for n in range(1, 20))
    with pytest.raises(ValueError):
        rescale_down(s, 3, 20)


class _Fixed:
    def __init__(self, series):
        self.series = series

    def qexp(self, order):
        return self.series.truncate(order)


def test_not_identified():
    # q alone is not a weight 3 form of level 8
    with pytest.raises(NotIdentifiedError):
        expand_and_identify(_Fixed(QSeries(1, {1: 1}, 400)), 8, rescale=1)


def test_gamma1_index():
    assert [gamma1_index(M) for M in (1, 2, 4, 6, 8, 12, 16)] == [1, 3, 12, 24, 48, 96, 192]


def test_degeneracy_pullback():
    assert level_degeneracy_pullback({(1, 2): 1, (1, 0): -1}, 0) == {(1, 5): 2, (5, 1): 2, (1, 1): -2, (5, 5): -2}
    assert level_degeneracy_pullback({(2, 1): 1}, 1) == {(2, 4): 4, (6, 0): 4}
    with pytest.raises(ValueError):
        level_degeneracy_pullback({}, 0, 3, 6)
