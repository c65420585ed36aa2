from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modmahler.eis import (E3Spec, E3_qexp, G_constant, G_qexp, QuasiModularError, bernoulli_frac,
                           bernoulli_number, bernoulli_poly, char_by_label, characters, dirichlet_L_neg,
                           eisenstein_basis, newform_coeffs, newforms_at_level, trivial_char)


def test_bernoulli_numbers():
    assert [bernoulli_number(n) for n in range(5)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]


@given(st.fractions(min_value=0, max_value=1, max_denominator=30), st.integers(1, 6))
def test_bernoulli_reflection(x, k):
    assert bernoulli_poly(k, 1 - x) == (-1) ** k * bernoulli_poly(k, x)


def test_bernoulli_frac_periodic():
    assert bernoulli_frac(3, Fraction(7, 4)) == bernoulli_poly(3, Fraction(3, 4))


def test_character_labels():
    chi4 = char_by_label("chi4")
    assert chi4.parity() == -1 and [chi4(n) for n in range(4)] == [0, 1, 0, -1]
    chi3 = char_by_label("chi3")
    assert [chi3(n) for n in range(3)] == [0, 1, -1]
    assert char_by_label("chi8").parity() == 1 and char_by_label("chi-8").parity() == -1


def test_character_group_sizes():
    assert len(characters(8)) == 4
    assert len(characters(12)) == 4
    assert len(characters(16)) == 8


def test_special_L_values():
    assert dirichlet_L_neg(char_by_label("chi4"), 1) == Fraction(1, 2)
    assert dirichlet_L_neg(char_by_label("chi3"), 1) == Fraction(1, 3)
    assert dirichlet_L_neg(char_by_label("chi4"), 3) == Fraction(-1, 2)
    assert dirichlet_L_neg(char_by_label("chi3"), 3) == Fraction(-2, 9)
    assert dirichlet_L_neg(trivial_char(), 3) == 0  # zeta(-2)
    assert dirichlet_L_neg(trivial_char(), 2) == Fraction(-1, 12)  # zeta(-1)


def test_G_series_symmetry():
    # G^(k)_{-a,-b} = (-1)^k G^(k)_{a,b}
    for k in (1, 3):
        for a, b in [(1, 2), (3, 5), (0, 3)]:
            s = G_qexp(k, a, b, 8, 30)
            t = G_qexp(k, -a, -b, 8, 30)
            assert t == s.scale((-1) ** k)


def test_G2_quasi_needs_difference():
    with pytest.raises(QuasiModularError):
        G_qexp(2, 0, 1, 8, 10)
    G_qexp(2, 0, 1, 8, 10, allow_quasi=True)


def test_G_constant_values():
    assert G_constant(1, 0, 6, 8) == Fraction(-1, 4)
    assert G_constant(3, 0, 1, 8) == G_qexp(3, 0, 1, 8, 5).coeff(0)


def test_E3_expansion():
    s = E3_qexp(E3Spec(char_by_label("chi4"), trivial_char(), 1), 6)
    assert [s.coeff(n) for n in range(6)] == [0, 2, 8, 16, 32, 52]
    s = E3_qexp(E3Spec(trivial_char(), char_by_label("chi4"), 2), 6)
    assert s.coeff(0) == Fraction(-1, 2) and s.coeff(1) == 0 and s.coeff(2) == 2


def test_E3_parity_condition():
    with pytest.raises(ValueError):
        E3Spec(trivial_char(), trivial_char())


def test_eisenstein_basis_levels():
    labels = {sp.label for sp in eisenstein_basis(8)}
    assert "E3[chi4,1,1]" in labels and "E3[1,chi4,2]" in labels
    assert all(8 % sp.level() == 0 for sp in eisenstein_basis(8))


def test_newform_tables():
    f8 = newform_coeffs("f8")
    assert f8.coeffs[:11] == [1, -2, -2, 4, 0, 4, 0, -8, -5, 0, 14]
    for lab in ("f8", "f12", "f16"):
        assert newform_coeffs(lab).check_multiplicative(200)
    assert newforms_at_level(16) == ["f16", "f8"]
    assert newforms_at_level(12) == ["f12"]
    with pytest.raises(KeyError):
        newform_coeffs("f7")
