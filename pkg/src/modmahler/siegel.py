"""Siegel units g_{a,b}: product expansions, SL2(Z) phases, cusp behaviour."""

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactq import Cyclotomic, QSeries, zeta


def B2(x):
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


def P1(x):
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def _check_sl2(g):
    (a, b), (c, d) = g
    if a * d - b * c != 1:
        raise ValueError("matrix %r is not in SL2(Z)" % (g,))


def act(g, tau):
    (a, b), (c, d) = g
    return (a * tau + b) / (c * tau + d)


def row_times(u, g, N):
    """(a,b) * g as row vector, reduced mod N."""
    (p, q), (r, s) = g
    a, b = u
    return ((a * p + b * r) % N, (a * q + b * s) % N)


# ---------------------------------------------------------------- q-series

def siegel_qexp(a, b, N, order=8):
    """g_{a,b} as a QSeries, exact to q^(lowest + order)."""
    a %= N
    b %= N
    if a == 0 and b == 0:
        raise ValueError("g_{0,0} is not defined")
    lead = B2(Fraction(a, N)) / 2
    # work on the lattice (1/N)Z for the product part
    prec = int(order * N)  # product part known below exponent `order`
    prod = QSeries(N, {0: Cyclotomic.rational(1, N)}, prec)
    z_b = zeta(N, b)
    z_mb = zeta(N, -b)
    n = 0
    while n * N + a < prec:
        e = n * N + a
        if e == 0:
            prod = prod.scale(1 - z_b)
        else:
            prod = prod * QSeries(N, {0: 1, e: -z_b}, prec)
        n += 1
    n = 1
    while n * N - a < prec:
        prod = prod * QSeries(N, {0: 1, n * N - a: -z_mb}, prec)
        n += 1
    return shift(prod, lead)


def shift(s, e):
    """Multiply a series by q^e."""
    e = Fraction(e)
    M = math.lcm(s.M, e.denominator)
    t = s._relattice(M)
    k = int(e * M)
    return QSeries(M, {j + k: v for j, v in t.coeffs.items()},
                   None if t.prec is None else t.prec + k).normalized()


def siegel_value(a, b, N, tau, eps=1e-18):
    """Numerical g_{a,b}(tau) from the product."""
    a %= N
    b %= N
    if a == 0 and b == 0:
        raise ValueError("g_{0,0} is not defined")
    x = a / N
    zb = cmath.exp(2j * math.pi * b / N)
    q = lambda e: cmath.exp(2j * math.pi * e * tau)
    val = q(float(B2(Fraction(a, N)) / 2))
    n = 0
    while True:
        t1 = q(n + x) * zb
        t2 = q(n + 1 - x) / zb
        val *= (1 - t1) * (1 - t2)
        if abs(t1) + abs(t2) < eps and n > 0:
            break
        n += 1
    return val


# ------------------------------------------------------------- transformation

def _phase_branch2(a, b, N, g):
    (c, e), (d, f) = g
    at = a % N
    ap, bp = row_times((a, b), g, N)
    r = Fraction(c, d) * B2(Fraction(at, N)) + Fraction(f, d) * B2(Fraction(ap, N))
    if at == 0:
        r += P1(Fraction(b, N))
    if ap == 0:
        r -= P1(Fraction(bp, N))
    s = Fraction(0)
    for k in range(1, d + 1):
        x = k - Fraction(at, N)
        s += P1(x / d) * P1(Fraction(c, d) * x - Fraction(b, N))
    r -= 2 * s
    return r % 2, (ap, bp)


def _negation_phase(t, N):
    """g_t = e^{i pi r} g_{-t}; returns r."""
    a, b = t
    if a % N:
        return Fraction(0)
    return (1 + Fraction(2 * (b % N), N)) % 2


def transformation_phase(a, b, N, g):
    """Return (r, (a',b')) with g_{a,b}(gamma tau) = e^{i pi r} g_{a',b'}(tau),
    (a',b') = (a,b) gamma mod N."""
    _check_sl2(g)
    if (a % N, b % N) == (0, 0):
        raise ValueError("g_{0,0} is not defined")
    (c, e), (d, f) = g
    target = row_times((a, b), g, N)
    neg = False
    if d < 0 or (d == 0 and c < 0):
        g = ((-c, -e), (-d, -f))
        (c, e), (d, f) = g
        neg = True
    if d == 0:
        # g = (1 k; 0 1)
        k = e
        r = (k * B2(Fraction(a % N, N))) % 2
        t0 = (a % N, (k * a + b) % N)
    else:
        r, t0 = _phase_branch2(a, b, N, g)
    if neg:
        # t0 = -target; rewrite g_{t0} in terms of g_{target}
        r = (r + _negation_phase(t0, N)) % 2
    return r, target


def phase_to_cyclotomic(r):
    """e^{i pi r} as a cyclotomic number."""
    r = Fraction(r) % 2
    n = 2 * r.denominator
    return zeta(n, r.numerator)


# ------------------------------------------------------------------ units

@dataclass
class UnitProduct:
    """prefactor * prod g_{a,b}^c at level N."""
    N: int
    factors: list = field(default_factory=list)  # [((a,b), c)]
    prefactor: object = 1

    def __post_init__(self):
        merged = {}
        for (a, b), c in self.factors:
            key = (a % self.N, b % self.N)
            if key == (0, 0):
                raise ValueError("index (0,0) in a unit product")
            merged[key] = merged.get(key, 0) + int(c)
        self.factors = [(k, c) for k, c in merged.items() if c]

    def __mul__(self, other):
        if self.N != other.N:
            raise ValueError("level mismatch")
        return UnitProduct(self.N, self.factors + other.factors,
                           self.prefactor * other.prefactor)

    def __pow__(self, e):
        pre = self.prefactor
        if not isinstance(pre, Cyclotomic):
            pre = Cyclotomic.rational(pre)
        return UnitProduct(self.N, [(k, c * e) for k, c in self.factors], pre ** e)

    def prefactor_cyc(self):
        if isinstance(self.prefactor, Cyclotomic):
            return self.prefactor
        return Cyclotomic.rational(self.prefactor)

    def qexp(self, order=8):
        s = QSeries.constant(self.prefactor_cyc())
        for (a, b), c in self.factors:
            g = siegel_qexp(a, b, self.N, order + 2)
            s = s * (g ** c)
        v = s.valuation()
        if v is not None:
            s = s.truncate(v + order)
        return s

    def __str__(self):
        parts = [repr(self.prefactor)]
        for (a, b), c in self.factors:
            parts.append("g(%d,%d)^%d" % (a, b, c))
        return " * ".join(parts) + " @ level %d" % self.N


_PREF_ATOM = re.compile(r"^([+-]?)(\d+(?:/\d+)?|i|z(\d+)(?:\^(-?\d+))?)$")


def _parse_prefactor_atom(tok):
    m = _PREF_ATOM.match(tok)
    if not m:
        raise ValueError("bad prefactor factor %r" % tok)
    sign, body, n, k = m.groups()
    if body == "i":
        v = zeta(4)
    elif n is not None:
        v = zeta(int(n), int(k) if k else 1)
    else:
        v = Cyclotomic.rational(Fraction(body))
    return -v if sign == "-" else v


def parse_unit(text):
    """Parse 'pref * g(a1,b1)^c1 * ... @ level N'."""
    if "@" not in text:
        raise ValueError("missing '@ level N'")
    body, lev = text.split("@", 1)
    m = re.match(r"\s*level\s+(\d+)\s*$", lev)
    if not m:
        raise ValueError("bad level clause %r" % lev)
    N = int(m.group(1))
    pref = Cyclotomic.rational(1)
    factors = []
    body = body.replace(" ", "")
    for tok in body.split("*"):
        if not tok:
            continue
        gm = re.match(r"^g\((-?\d+),(-?\d+)\)(?:\^(-?\d+))?$", tok)
        if gm:
            a, b, c = gm.groups()
            factors.append(((int(a), int(b)), int(c) if c else 1))
        else:
            if tok.startswith("-g("):
                pref = -pref
                factors.append(_parse_g(tok[1:]))
            else:
                pref = pref * _parse_prefactor_atom(tok)
    return UnitProduct(N, factors, pref)


def _parse_g(tok):
    gm = re.match(r"^g\((-?\d+),(-?\d+)\)(?:\^(-?\d+))?$", tok)
    if not gm:
        raise ValueError("bad factor %r" % tok)
    a, b, c = gm.groups()
    return ((int(a), int(b)), int(c) if c else 1)


# -------------------------------------------------------------------- cusps

def cusp_matrix(c, d):
    """Some gamma in SL2(Z) with gamma(infinity) = c/d (d = 0 means infinity)."""
    if d == 0:
        return ((1, 0), (0, 1))
    g = math.gcd(c, d)
    c //= g
    d //= g
    if d < 0:
        c, d = -c, -d
    # find e, f with c f - e d = 1
    x, y = _ext_gcd(c, d)  # c x + d y = 1
    return ((c, -y), (d, x))


def _ext_gcd(a, b):
    if b == 0:
        return (1 if a >= 0 else -1), 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    aa, bb = a, b
    while bb:
        qq = aa // bb
        aa, bb = bb, aa - qq * bb
        x0, x1 = x1, x0 - qq * x1
        y0, y1 = y1, y0 - qq * y1
    if aa < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def _cusp_pair(cusp):
    if cusp in ("oo", "inf", None) or cusp == math.inf:
        return 1, 0
    if isinstance(cusp, tuple):
        return cusp
    f = Fraction(cusp)
    return f.numerator, f.denominator


def ord_at_cusp(F, cusp, gamma=None):
    c, d = _cusp_pair(cusp)
    g = gamma or cusp_matrix(c, d)
    s = Fraction(0)
    for (a, b), e in F.factors:
        ap, _ = row_times((a, b), g, F.N)
        s += e * B2(Fraction(ap, F.N))
    return s / 2


def eval_at_cusp(F, cusp, gamma=None):
    """Exact value at a cusp, or the string 'zero' / 'pole'."""
    c, d = _cusp_pair(cusp)
    g = gamma or cusp_matrix(c, d)
    o = ord_at_cusp(F, cusp, g)
    if o > 0:
        return "zero"
    if o < 0:
        return "pole"
    r = Fraction(0)
    val = F.prefactor_cyc()
    for (a, b), e in F.factors:
        ph, (ap, bp) = transformation_phase(a, b, F.N, g)
        r += e * ph
        if ap == 0:
            val = val * (1 - zeta(F.N, bp)) ** e
    return (val * phase_to_cyclotomic(r)).minimal()


def eval_on_h(F, tau):
    """Numerical value of the unit at tau in the upper half plane."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    v = complex(F.prefactor_cyc())
    for (a, b), e in F.factors:
        v *= siegel_value(a, b, F.N, tau) ** e
    return v


def unit_Z():
    return parse_unit("-i * g(0,3)^2 * g(0,1)^-2 @ level 8")
