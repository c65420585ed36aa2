import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modmahler.modsym import (IDENTITY, SIGMA, X, Y, PhiCombo, ShokurovTerm, WeightPoly, act_cusp, boundary,
                              boundary_of_path, convergence_check, convergents, corollary_condition, cusp,
                              cusp_chain, cusp_matrices, manin_decompose, matmul, parse_weight_poly,
                              phi_pullback, residue_sum, residue_trivial_check)


def test_cusp_normalisation():
    assert cusp("oo") == (1, 0)
    assert cusp("2/4") == (1, 2)
    assert cusp((-1, -3)) == (1, 3)
    with pytest.raises(ValueError):
        cusp((0, 0))


def test_convergents():
    assert [Fraction(p, q) for p, q in convergents(cusp("7/5"))][-1] == Fraction(7, 5)


def test_weight_poly_action():
    g = ((2, 1), (3, 2))
    P = WeightPoly(1, 0)
    assert P.act(g).act(((2, -1), (-3, 2))) == P
    assert parse_weight_poly("2X - Y") == WeightPoly(2, -1)
    assert parse_weight_poly("Y") == Y and parse_weight_poly("X") == X


def test_manin_decomposition_Y_half_infinity():
    terms = manin_decompose(Y, "1/2", "oo")
    got = [(t.coefficient, t.g, t.base) for t in terms]
    assert got == [(1, ((0, -1), (1, -2)), "X"), (2, ((-1, 0), (-2, -1)), "X"), (-1, ((0, -1), (1, 0)), "X")]


def test_manin_decomposition_adjacent_pair():
    terms = manin_decompose(Y, "1/2", "2/3")
    assert [(t.coefficient, t.g) for t in terms] == [(3, ((2, 1), (3, 2))), (-2, ((1, -2), (2, -3)))]


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30), st.integers(1, 25), st.integers(-30, 30), st.integers(1, 25),
       st.integers(-3, 3), st.integers(-3, 3))
def test_decomposition_telescopes(p1, q1, p2, q2, m, n):
    P = WeightPoly(m, n)
    terms = manin_decompose(P, Fraction(p1, q1), Fraction(p2, q2), use_sigma=False)
    want = {k: v for k, v in boundary_of_path(P, Fraction(p1, q1), Fraction(p2, q2)).items() if v != (0, 0)}
    assert boundary(terms) == want
    chain = cusp_chain(Fraction(p1, q1), Fraction(p2, q2))
    for r, s in zip(chain, chain[1:]):
        assert abs(r[0] * s[1] - r[1] * s[0]) == 1


def test_sigma_rewrite_keeps_boundary():
    a = manin_decompose(Y, "3/7", "oo", use_sigma=True)
    b = manin_decompose(Y, "3/7", "oo", use_sigma=False)
    assert boundary(a) == boundary(b)


def p2_base():
    c = Fraction(8 * 64, 3)
    return [(c, (0, 3), (0, 2)), (-c, (0, 1), (0, 2))]


def test_phi_six_term_display():
    phi = phi_pullback(p2_base(), manin_decompose(Y, "1/2", "oo"), 8)
    six = PhiCombo.from_list(8, [(1, (3, 2), (2, 4)), (-1, (1, 6), (2, 4)), (2, (2, 5), (4, 6)),
                                   (-2, (6, 7), (4, 6)), (-1, (3, 0), (2, 0)), (1, (1, 0), (2, 0))])
    assert phi == six.scale(Fraction(512, 3))


def test_convergence_predicates():
    phi = phi_pullback(p2_base(), manin_decompose(Y, "1/2", "oo"), 8)
    assert convergence_check(phi).xConverges
    bad = PhiCombo.from_list(8, [(1, (0, 1), (1, 0))])
    assert not convergence_check(bad).xConverges
    direct = phi_pullback(p2_base(), [ShokurovTerm(Fraction(1), IDENTITY, "Y")], 8)
    assert not convergence_check(direct).xConverges


def test_phicombo_rejects_zero_u():
    with pytest.raises(ValueError):
        PhiCombo.from_list(8, [(1, (0, 0), (1, 2))])


def test_residue_criterion():
    assert residue_trivial_check(3, 1, 2, 8)
    assert not residue_trivial_check(1, 2, 2, 8)
    assert residue_trivial_check(2, 2, 3, 8)
    assert corollary_condition(3, 1, 2, 8) and not corollary_condition(1, 2, 2, 8)


def test_residue_criterion_agrees_with_exact_sum():
    rng = random.Random(0)
    for _ in range(25):
        b, b2, d = rng.randrange(8), rng.randrange(8), rng.randrange(1, 8)
        if corollary_condition(b, b2, d, 8):
            assert residue_sum([(1, (0, b), (0, d)), (-1, (0, b2), (0, d))], 8) is None


def test_residues_vanish_at_chain_cusps_for_R():
    eis0 = {(0, 2): 24, (0, 4): 8, (0, 1): -16, (0, 3): -16}
    base = [(c * Fraction(64, 3), u, (0, 2)) for u, c in eis0.items()]
    mats = cusp_matrices(cusp_chain("1/2", "oo"), 8)
    assert residue_sum(base, 8, mats) is None


def test_act_cusp_and_sigma():
    assert act_cusp(SIGMA, (1, 0)) == (0, 1)
    assert matmul(SIGMA, SIGMA) == ((-1, 0), (0, -1))


def test_shokurov_json_round_trip():
    t = ShokurovTerm(Fraction(3), ((2, 1), (3, 2)), "X")
    assert ShokurovTerm.from_json(t.to_json()) == t
