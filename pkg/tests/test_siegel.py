import cmath
import math
import random

import pytest

from modmahler.exactq import Cyclotomic, zeta
from modmahler.siegel import (act, eval_at_cusp, eval_on_h, ord_at_cusp, parse_unit, phase_to_cyclotomic,
                              siegel_qexp, siegel_value, transformation_phase, unit_Z)


def random_sl2(rng, size=7):
    while True:
        a, c = rng.randint(-size, size), rng.randint(-size, size)
        if math.gcd(a, c) != 1:
            continue
        # extended Euclid for b, d with ad - bc = 1
        x0, x1, y0, y1, r0, r1 = 1, 0, 0, 1, a, c
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        d, b = x0 * r0, -y0 * r0  # a x0 + c y0 = r0 = +-1
        k = rng.randint(-3, 3)
        g = ((a, b + k * a), (c, d + k * c))
        assert g[0][0] * g[1][1] - g[0][1] * g[1][0] == 1
        return g


def transformation_residual(a, b, N, g, tau):
    r, (ap, bp) = transformation_phase(a, b, N, g)
    lhs = siegel_value(a, b, N, act(g, tau))
    rhs = cmath.exp(1j * math.pi * float(r)) * siegel_value(ap, bp, N, tau)
    return abs(lhs - rhs) / abs(rhs)


def test_transformation_law_level8_all_indices():
    rng = random.Random(8)
    gammas = [random_sl2(rng) for _ in range(5)]
    taus = [complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6)) for _ in range(3)]
    worst = 0.0
    for a in range(8):
        for b in range(8):
            if (a, b) == (0, 0):
                continue
            for g in gammas:
                for tau in taus:
                    worst = max(worst, transformation_residual(a, b, 8, g, tau))
    assert worst < 1e-9


@pytest.mark.parametrize("N", [4, 6])
def test_transformation_law_other_levels(N):
    rng = random.Random(N)
    for _ in range(20):
        a, b = rng.randrange(N), rng.randrange(N)
        if (a, b) == (0, 0):
            continue
        g = random_sl2(rng)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.5))
        assert transformation_residual(a, b, N, g, tau) < 1e-9


def test_qexp_matches_product():
    tau = complex(0.1, 1.1)
    for a, b in [(0, 1), (1, 3), (3, 0), (2, 5)]:
        s = siegel_qexp(a, b, 8, 12)
        assert abs(s.eval(tau)[0] - siegel_value(a, b, 8, tau)) < 1e-10


def test_Z_cusp_values_exact():
    Z = unit_Z()
    sqrt2 = zeta(8) + zeta(8, 7)
    assert eval_at_cusp(Z, "oo") == Cyclotomic.rational(3) + sqrt2 * 2
    assert eval_at_cusp(Z, "1/2") == Cyclotomic.rational(1)
    assert ord_at_cusp(Z, "oo") == 0


def test_unit_on_h_agrees_with_cusp_limit():
    Z = unit_Z()
    v = eval_on_h(Z, complex(0, 6))
    assert abs(v - (3 + 2 * math.sqrt(2))) < 1e-6


def test_parse_unit_forms():
    F = parse_unit("-z6 * g(0,2)^4 * g(0,1)^-4 @ level 6")
    assert F.N == 6 and dict(F.factors) == {(0, 2): 4, (0, 1): -4}
    assert eval_at_cusp(F, "oo") == Cyclotomic.rational(9)
    with pytest.raises(ValueError):
        parse_unit("g(0,0) @ level 4")
    with pytest.raises(ValueError):
        parse_unit("g(0,1)")


def test_phase_to_cyclotomic():
    assert phase_to_cyclotomic(1) == Cyclotomic.rational(-1)
    assert phase_to_cyclotomic("1/2") == zeta(4)
