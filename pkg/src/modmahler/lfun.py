"""Completed L-values of weight-3 forms: cusp forms via the incomplete gamma
series, Eisenstein combinations exactly at s = 0."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .eis import E3Spec, dirichlet_L_neg, newform_coeffs
from .exactq import Cyclotomic

WEIGHT = 3


def _upper_gamma(s, x):
    return float(mpmath.gammainc(s, x))


# --------------------------------------------------------------- cusp forms

def fricke_image(coeffs, N, tau, terms=None):
    """(W_N f)(tau) = -i (sqrt(N) tau)^-3 f(-1/(N tau)) from the q-expansion."""
    return -1j * (math.sqrt(N) * tau) ** -3 * eval_series(coeffs, -1 / (N * tau), terms)


def eval_series(coeffs, tau, terms=None):
    q = complex(mpmath.exp(2j * mpmath.pi * tau))
    n_max = terms or len(coeffs)
    s = 0j
    qn = 1
    for n in range(1, n_max + 1):
        qn *= q
        s += coeffs[n - 1] * qn
    return s


def fricke_sign(f, N=None, points=(1.3, 0.77)):
    """Eigenvalue of W_N on f, from W_N f / f at points tau = i c / sqrt(N).

    The point c = 1 is fixed by W_N and carries no information, so two
    points off the fixed point are used."""
    N = N or f.level
    ratios = []
    for c in points:
        tau = 1j * c / math.sqrt(N)
        ratios.append(fricke_image(f.coeffs, N, tau) / eval_series(f.coeffs, tau))
    eps = round(ratios[0].real)
    for r in ratios:
        if abs(r - eps) > 0.1 or eps not in (1, -1):
            raise ValueError("W_N f / f = %s is not close to +-1" % r)
    return eps, ratios


def _tail_bound(N, s, n0):
    # |a_n| <= n^2 and Gamma(a, x) <= 2 x^(a-1) e^-x for x >= 2|a| + 2
    tot = 0.0
    n = n0
    while True:
        x = 2 * math.pi * n / math.sqrt(N)
        t = n * n * 2 * (x ** -1 + x ** -1) * math.exp(-x)
        tot += t
        if t < 1e-30 or n > n0 + 10000:
            break
        n += 1
    return tot


def lambda_cusp(f, s, N=None, eps=None, precision=1e-13):
    """Lambda_N(f,s) = N^(s/2) (2 pi)^-s Gamma(s) L(f,s) via the split integral."""
    N = N or f.level
    if eps is None:
        eps, _ = fricke_sign(f, N)
    total = 0.0
    n = 1
    while True:
        x = 2 * math.pi * n / math.sqrt(N)
        if x > 2 * abs(s) + 2 * WEIGHT + 2 and _tail_bound(N, s, n) < precision:
            break
        if n > len(f.coeffs):
            raise ValueError("precision %g needs more than %d coefficients" % (precision, len(f.coeffs)))
        a = f.coeffs[n - 1]
        if a:
            total += a * (x ** -s * _upper_gamma(s, x) + eps * x ** (s - WEIGHT) * _upper_gamma(WEIGHT - s, x))
        n += 1
    return total


def lambda_cusp_quad(f, s, N=None):
    """Second method: direct quadrature of int f(i y / sqrt N) y^(s-1) dy.

    No functional equation is used. Below y0 = 2 pi / (40 sqrt N) the integrand
    is bounded by y^(s-4) e^(-40) (up to a constant) and is dropped."""
    N = N or f.level
    old = mpmath.mp.dps
    mpmath.mp.dps = 45
    coeffs = [mpmath.mpf(c) for c in f.coeffs]
    rN = mpmath.sqrt(N)

    def integrand(y):
        q = mpmath.exp(-2 * mpmath.pi * y / rN)
        v = mpmath.mpf(0)
        qn = mpmath.mpf(1)
        for c in coeffs:
            qn *= q
            v += c * qn
            if qn < mpmath.mpf(10) ** -60:
                break
        return v * y ** (s - 1)

    y0 = 2 * mpmath.pi / (40 * rN)
    val = mpmath.quad(integrand, [y0, 0.1, 0.3, 1, 3, 10, mpmath.inf])
    mpmath.mp.dps = old
    return float(val)


# --------------------------------------------------------- Eisenstein side

BASIS = ("1", "log2", "log3", "zeta3/pi2")
ZETA3_PI2 = float(mpmath.zeta(3) / mpmath.pi ** 2)
BASIS_VALUES = {"1": 1.0, "log2": math.log(2), "log3": math.log(3), "zeta3/pi2": ZETA3_PI2}


@dataclass
class ClosedFormValue:
    exact: dict = field(default_factory=dict)  # basis label -> Fraction
    numeric: float = 0.0
    other: float = 0.0  # numeric part outside the basis
    certificate: float = 0.0  # |numeric - value from exact part|

    def value(self):
        return sum(float(c) * BASIS_VALUES[k] for k, c in self.exact.items()) + self.other

    def __str__(self):
        parts = []
        for k in BASIS:
            c = self.exact.get(k, 0)
            if c:
                parts.append("%s" % c if k == "1" else "%s*%s" % (c, k))
        if self.other:
            parts.append("%.12g" % self.other)
        return " + ".join(parts) if parts else "0"


def _log_basis(t):
    """log t as a dict over the basis (t a positive integer built from 2 and 3)."""
    out = {}
    for p, lab in ((2, "log2"), (3, "log3")):
        while t % p == 0:
            out[lab] = out.get(lab, 0) + 1
            t //= p
    if t != 1:
        raise ValueError("log %d outside the exact basis" % t)
    return out


def _rat(v):
    if isinstance(v, Cyclotomic):
        return v.to_fraction() if v.is_rational() else None
    return Fraction(v)


class EisensteinPoleError(ValueError):
    pass


def _L0(chi):
    """L(chi, 0) as a rational, or None if not rational."""
    if chi.modulus > 1 and chi.parity() == 1:
        return Fraction(0)
    return _rat(dirichlet_L_neg(chi, 1))


def _Lm2(chi):
    """L(chi, -2) as a rational, or None."""
    if chi.parity() == 1:
        return Fraction(0)
    return _rat(dirichlet_L_neg(chi, 3))


def lambda_eis_reg(combo, N=1):
    """Regularised Lambda*(sum c_i E3^{phi_i,psi_i,t_i}, 0).

    combo: list of (coefficient, E3Spec). With
    A(s) = sum 2 c_i t_i^-s L(phi_i,s) L(psi_i,s-2) (sqrt(N)/2pi)^s the value is
    A'(0); A(0) must vanish for the Gamma pole to cancel."""
    combo = [(Fraction(c), sp) for c, sp in combo]
    numeric = _lambda_eis_numeric(combo, N)
    real = all(sp.phi.is_real() and sp.psi.is_real() for _, sp in combo)
    if not real:
        if numeric != numeric:
            raise EisensteinPoleError("Lambda* has a pole at s = 0; case ill-posed")
        return ClosedFormValue({}, numeric, numeric, 0.0)
    A0 = 0
    exact = {}
    groups = {}
    for c, sp in combo:
        l0, l2 = _L0(sp.phi), _Lm2(sp.psi)
        v0 = 2 * c * l0 * l2
        A0 += v0
        if v0:
            for lab, k in _log_basis(sp.t).items():
                exact[lab] = exact.get(lab, 0) - v0 * k
        if sp.psi.modulus == 1 and l0:
            # zeta'(-2) = -zeta(3)/(4 pi^2)
            exact["zeta3/pi2"] = exact.get("zeta3/pi2", 0) - 2 * c * l0 / 4
        groups[(sp.phi, sp.psi)] = groups.get((sp.phi, sp.psi), 0) + c
    if A0 != 0:
        raise EisensteinPoleError("Lambda* has a pole at s = 0 (A(0) = %s); case ill-posed" % A0)
    # derivative terms outside the basis: L'(phi,0) L(psi,-2) and L(phi,0) L'(psi,-2)
    # with psi nontrivial; both only depend on the group total
    other = 0.0
    for (phi, psi), tot in groups.items():
        if not tot:
            continue
        l0, l2 = _L0(phi), _Lm2(psi)
        if l2:
            other += 2 * float(tot) * float(l2) * _dL(phi, 0)
        if l0 and psi.modulus > 1:
            other += 2 * float(tot) * float(l0) * _dL(psi, -2)
    exact = {k: v for k, v in exact.items() if v}
    ev = sum(float(v) * BASIS_VALUES[k] for k, v in exact.items())
    return ClosedFormValue(exact, numeric, other, abs(numeric - ev - other))


def _dL(chi, s):
    mpmath.mp.dps = 30
    v = mpmath.diff(lambda x: mpmath.dirichlet(x, _chi_list(chi)), s)
    mpmath.mp.dps = 15
    return float(mpmath.re(v))


def _chi_list(chi):
    return [complex(chi(n)) if isinstance(chi(n), Cyclotomic) else float(chi(n))
            for n in range(chi.modulus)] if chi.modulus > 1 else [1]


def _A_single(sp, N):
    phi_l, psi_l = _chi_list(sp.phi), _chi_list(sp.psi)
    base = mpmath.sqrt(N) / (2 * mpmath.pi)

    def A(s):
        return 2 * mpmath.power(sp.t, -s) * mpmath.dirichlet(s, phi_l) * mpmath.dirichlet(s - 2, psi_l) * base ** s
    return A


def _lambda_eis_numeric(combo, N):
    """Independent numeric evaluation: derivative of A at 0 by mpmath."""
    mpmath.mp.dps = 30
    fs = [(Fraction(c), _A_single(sp, N)) for c, sp in combo]

    def A(s):
        return sum(mpmath.mpf(c.numerator) / c.denominator * f(s) for c, f in fs)
    a0 = A(0)
    v = mpmath.diff(A, 0)
    mpmath.mp.dps = 15
    if abs(a0) > 1e-20:
        return float("nan")
    return float(mpmath.re(v))


def lambda_eis(spec, s, N=None):
    """Lambda(E3^{phi,psi,t}, s) away from s = 0."""
    N = N or spec.level()
    A = _A_single(spec, N)
    return float(mpmath.re(mpmath.gamma(s) * A(s)))


def zeta_prime_minus2():
    return float(mpmath.zeta(-2, derivative=1))


def newform_lambda(label, s):
    f = newform_coeffs(label)
    return lambda_cusp(f, s)
