import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modmahler.symb import (EisCombo, TorsionDivisor, act_minus, all_points, d_zero, gl2, horo_space_dim,
                            horospherical, horospherical_bruteforce, milnor_to_eis, mu_product, mu_tensor,
                            pi_epsilon, tensor, theta, unit_to_eis0)
from modmahler.siegel import parse_unit


def div_y():
    return TorsionDivisor(8, {(0, 0): -1, (0, 2): 1, (0, 4): 1, (0, 6): -1})


def div_x():
    return TorsionDivisor(8, {(0, 0): -1, (0, 2): -1, (0, 4): 1, (0, 6): 1})


def test_mu_of_d_tensor_d():
    d = div_y()
    want = TorsionDivisor(8, {(0, 2): -4, (0, 6): 4})
    assert mu_tensor(tensor(d, d), 8) == want
    assert mu_product(d, d) == want


def random_degree0(N, rng, k=4):
    pts = {}
    for _ in range(k):
        pts[(rng.randrange(N), rng.randrange(N))] = Fraction(rng.randint(-3, 3))
    d = TorsionDivisor(N, pts)
    return d - TorsionDivisor(N, {(0, 0): d.degree()})


@pytest.mark.parametrize("N", [4, 6, 8])
def test_mu_theta_is_N2(N):
    rng = random.Random(N)
    for _ in range(5):
        d = random_degree0(N, rng)
        assert mu_tensor(theta(d), N) == d.scale(N * N)


@pytest.mark.parametrize("N", [4, 6, 8])
def test_theta_mu_is_N2_on_eigenvectors(N):
    rng = random.Random(100 + N)
    for _ in range(4):
        x = pi_epsilon(tensor(random_degree0(N, rng), random_degree0(N, rng)), N)
        back = theta(mu_tensor(x, N))
        assert back == {k: N * N * v for k, v in x.items()}


def test_pi_epsilon_is_idempotent():
    rng = random.Random(5)
    for N in (4, 8):
        x = tensor(random_degree0(N, rng), random_degree0(N, rng))
        p = pi_epsilon(x, N)
        assert pi_epsilon(p, N) == p
        assert act_minus(p) == {k: -v for k, v in p.items()}  # eps = -1 eigenvector


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.integers(-3, 3), max_size=4))
def test_horospherical_matches_bruteforce(pts):
    d = TorsionDivisor(6, pts)
    lam = horospherical(1, d)
    for g in random.Random(1).sample(gl2(6), 6):
        assert lam(g) == horospherical_bruteforce(1, d, g)
    assert lam.check_invariants()


def test_horospherical_single_point():
    d = TorsionDivisor(8, {(0, 2): 1, (0, 0): -1})
    g = ((1, 0), (0, 1))
    assert horospherical_bruteforce(1, d, g) == Fraction(3, 64)
    assert horospherical(1, d)(g) == Fraction(3, 64)
    assert horospherical(1, TorsionDivisor(8, {})).is_zero()


def test_horo_dim():
    assert horo_space_dim(4, -1) == 6


def test_torsion_divisor_json_round_trip():
    d = div_y()
    assert TorsionDivisor.from_json(d.to_json()) == d
    e = EisCombo(1, 8, {(0, 2): Fraction(64, 3)}, True)
    assert EisCombo.from_json(e.to_json()) == e


def test_eis_combo_normalisation():
    assert EisCombo(1, 8, {(0, 6): 1}).coeffs == {(0, 2): -1}
    assert EisCombo(0, 8, {(0, 6): 1}).coeffs == {(0, 2): 1}
    assert EisCombo(1, 8, {(0, 4): 1}).coeffs == {}


def test_milnor_coefficient_gamma1_8():
    e = milnor_to_eis(div_x().iota(), div_y())
    assert e.sign_ambiguous
    assert {u: abs(c) for u, c in e.coeffs.items()} == {(0, 2): Fraction(64, 3)}
    with pytest.raises(ValueError):
        milnor_to_eis(TorsionDivisor(8, {(0, 1): 1}), div_y())


def test_unit_to_eis0_cases():
    show = lambda t: unit_to_eis0(parse_unit(t)).coeffs
    assert show("-i * g(0,3)^2 * g(0,1)^-2 @ level 8") == {(0, 1): -8, (0, 3): 8}
    assert show("i * g(0,2)^6 * g(0,4)^2 * g(0,1)^-4 * g(0,3)^-4 @ level 8") == \
        {(0, 2): 24, (0, 4): 8, (0, 1): -16, (0, 3): -16}
    assert show("g(3,0) * g(3,1) * g(3,2)^-1 * g(3,3)^-1 @ level 6") == \
        {(3, 0): 3, (3, 1): 3, (3, 2): -3, (3, 3): -3}


def test_mu_product_commutative():
    rng = random.Random(3)
    a, b = random_degree0(8, rng), random_degree0(8, rng)
    assert mu_product(a, b) == mu_product(b, a)
    assert len(all_points(8)) == 64
