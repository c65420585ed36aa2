"""Shokurov cycles and Manin symbols: continued-fraction decompositions, the
pullback action on symbol data, and the convergence and residue predicates."""

import cmath
import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .eis import bernoulli_frac
from .symb import gl2

SIGMA = ((0, -1), (1, 0))
IDENTITY = ((1, 0), (0, 1))


def matmul(g, h):
    (a, b), (c, d) = g
    (p, q), (r, s) = h
    return ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))


def inverse(g):
    (a, b), (c, d) = g
    if a * d - b * c != 1:
        raise ValueError("matrix %r is not in SL2(Z)" % (g,))
    return ((d, -b), (-c, a))


def mat_mod(g, N):
    return tuple(tuple(x % N for x in row) for row in g)


# ------------------------------------------------------------------- cusps

INF = (1, 0)


def cusp(x):
    """Normalise a cusp to (p, q) with gcd 1, q >= 0 and infinity = (1, 0)."""
    if isinstance(x, tuple):
        p, q = x
    elif x is None or (isinstance(x, str) and x.strip().lower() in ("oo", "inf", "infinity")):
        return INF
    else:
        f = Fraction(x)
        p, q = f.numerator, f.denominator
    if q == 0:
        if p == 0:
            raise ValueError("0/0 is not a cusp")
        return INF
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    return p, q


def cusp_str(c):
    return "oo" if c[1] == 0 else str(Fraction(c[0], c[1]))


def act_cusp(g, c):
    (a, b), (cc, d) = g
    return cusp((a * c[0] + b * c[1], cc * c[0] + d * c[1]))


def convergents(c):
    """Continued-fraction convergents p_k/q_k of a finite cusp."""
    p, q = c
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    while q:
        a = p // q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append((h1, k1))
        p, q = q, p - a * q
    return out


def _chain_to_inf(c):
    if c == INF:
        return [INF]
    return list(reversed(convergents(c))) + [INF]


# -------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class WeightPoly:
    """m X + n Y in Z[X,Y]_1."""
    m: int
    n: int

    def act(self, g):
        """gamma P(X,Y) = P(dX - bY, -cX + aY)."""
        (a, b), (c, d) = g
        return WeightPoly(self.m * d - self.n * c, -self.m * b + self.n * a)

    def __call__(self, x, y):
        return self.m * x + self.n * y

    def __add__(self, other):
        return WeightPoly(self.m + other.m, self.n + other.n)

    def scale(self, c):
        return WeightPoly(c * self.m, c * self.n)

    def is_zero(self):
        return self.m == 0 and self.n == 0

    def __str__(self):
        return "%dX%+dY" % (self.m, self.n)


X = WeightPoly(1, 0)
Y = WeightPoly(0, 1)


def parse_weight_poly(text):
    """Parse 'X', '-Y', '2X-Y', '3*X+2*Y'."""
    t = text.replace(" ", "")
    if not re.fullmatch(r"([+-]?\d*\*?[XY])+", t):
        raise ValueError("bad weight polynomial %r" % text)
    m = n = 0
    for sign, coef, var in re.findall(r"([+-]?)(\d*)\*?([XY])", t):
        c = int(coef) if coef else 1
        c = -c if sign == "-" else c
        if var == "X":
            m += c
        else:
            n += c
    return WeightPoly(m, n)


@dataclass(frozen=True)
class ShokurovTerm:
    """coefficient * g_*(base{0, oo})."""
    coefficient: Fraction
    g: tuple
    base: str = "X"

    def to_json(self):
        return {"c": str(self.coefficient), "g": [list(r) for r in self.g], "base": self.base}

    @classmethod
    def from_json(cls, d):
        return cls(Fraction(d["c"]), tuple(tuple(r) for r in d["g"]), d.get("base", "X"))

    def __str__(self):
        (a, b), (c, d) = self.g
        return "%s*(%d %d; %d %d)_*%s{0,oo}" % (self.coefficient, a, b, c, d, self.base)


def _segment_matrix(r, s):
    """g in SL2(Z) with g(0) = r and g(oo) = s, for adjacent cusps r, s."""
    g = ((s[0], r[0]), (s[1], r[1]))
    det = s[0] * r[1] - r[0] * s[1]
    if det == -1:
        g = ((s[0], -r[0]), (s[1], -r[1]))
    elif det != 1:
        raise ValueError("cusps %s, %s are not adjacent" % (cusp_str(r), cusp_str(s)))
    return g


def cusp_chain(alpha, beta):
    """A chain of pairwise adjacent cusps from alpha to beta."""
    a, b = cusp(alpha), cusp(beta)
    if a == b:
        return [a]
    if abs(a[0] * b[1] - a[1] * b[0]) == 1:
        return [a, b]
    path = _chain_to_inf(a) + list(reversed(_chain_to_inf(b)))[1:]
    stack = []
    for p in path:
        if stack and stack[-1] == p:
            continue
        if len(stack) >= 2 and stack[-2] == p:
            stack.pop()
            continue
        stack.append(p)
    return stack


def manin_segments(P, alpha, beta):
    """P{alpha,beta} = sum g_*(Q{0,oo}) as a list of (g, Q)."""
    chain = cusp_chain(alpha, beta)
    out = []
    for r, s in zip(chain, chain[1:]):
        g = _segment_matrix(r, s)
        out.append((g, P.act(inverse(g))))
    return out


def manin_decompose(P, alpha, beta, use_sigma=True):
    """Decompose P{alpha,beta} into Manin symbols g_*X{0,oo} (and g_*Y{0,oo}
    when use_sigma is False)."""
    terms = {}
    order = []

    def add(g, base, c):
        key = (g, base)
        if key not in terms:
            order.append(key)
            terms[key] = Fraction(0)
        terms[key] += c

    for g, Q in manin_segments(P, alpha, beta):
        if Q.m:
            add(g, "X", Q.m)
        if Q.n:
            if use_sigma:
                # Y{0,oo} = -sigma_* X{0,oo}
                add(matmul(g, SIGMA), "X", -Q.n)
            else:
                add(g, "Y", Q.n)
    return [ShokurovTerm(terms[k], k[0], k[1]) for k in order if terms[k]]


def boundary(terms):
    """Boundary of sum c g_*(B{0,oo}) as {cusp: WeightPoly}, used for telescoping checks."""
    out = {}
    for t in terms:
        base = X if t.base == "X" else Y
        poly = base.act(t.g)
        for cp, sgn in ((act_cusp(t.g, INF), 1), (act_cusp(t.g, (0, 1)), -1)):
            cur = out.get(cp, (Fraction(0), Fraction(0)))
            out[cp] = (cur[0] + sgn * t.coefficient * poly.m, cur[1] + sgn * t.coefficient * poly.n)
    return {k: v for k, v in out.items() if v != (0, 0)}


def boundary_of_path(P, alpha, beta):
    a, b = cusp(alpha), cusp(beta)
    if a == b:
        return {}
    return {b: (Fraction(P.m), Fraction(P.n)), a: (Fraction(-P.m), Fraction(-P.n))}


# ------------------------------------------------------------- symbol data

def _vec_mat(u, g, N):
    (p, q), (r, s) = g
    return ((u[0] * p + u[1] * r) % N, (u[0] * q + u[1] * s) % N)


@dataclass
class PhiCombo:
    """Rational combination of pairs [(u, v)] in (Z/N)^2 x (Z/N)^2."""
    N: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        out = {}
        for (u, v), c in self.coeffs.items():
            key = ((u[0] % self.N, u[1] % self.N), (v[0] % self.N, v[1] % self.N))
            out[key] = out.get(key, 0) + Fraction(c)
        self.coeffs = {k: v for k, v in out.items() if v}
        if any(u == (0, 0) for u, _ in self.coeffs):
            raise ValueError("phi((0,0), v) must vanish")

    @classmethod
    def from_list(cls, N, items):
        d = {}
        for c, u, v in items:
            d[(tuple(u), tuple(v))] = d.get((tuple(u), tuple(v)), 0) + Fraction(c)
        return cls(N, d)

    def items(self):
        return sorted(self.coeffs.items())

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, c in other.coeffs.items():
            d[k] = d.get(k, 0) + c
        return PhiCombo(self.N, d)

    def scale(self, c):
        return PhiCombo(self.N, {k: c * v for k, v in self.coeffs.items()})

    def pull(self, g):
        """g^* : [(u, v)] -> [(ug, vg)]."""
        return PhiCombo(self.N, {(_vec_mat(u, g, self.N), _vec_mat(v, g, self.N)): c
                                 for (u, v), c in self.coeffs.items()})

    def bar(self, g):
        """phi|g (u, v) = phi(u g^-1, v g^-1), i.e. the pullback through g."""
        return self.pull(g)

    def odd_part(self):
        """1/2 (phi(u,v) - phi(u,-v))."""
        N = self.N
        d = {}
        for (u, v), c in self.coeffs.items():
            d[(u, v)] = d.get((u, v), 0) + c / 2
            nv = ((-v[0]) % N, (-v[1]) % N)
            d[(u, nv)] = d.get((u, nv), 0) - c / 2
        return PhiCombo(N, d)

    def negate_u(self):
        N = self.N
        return PhiCombo(N, {(((-u[0]) % N, (-u[1]) % N), v): c for (u, v), c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, PhiCombo) and self.N == other.N and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join("%s[(%d,%d),(%d,%d)]" % (c, *u, *v) for (u, v), c in self.items())


def phi_pullback(base, terms, N):
    """sum over terms of coefficient * (base pulled back through g).

    base: list of (coefficient, u, v); Y-based terms are rewritten with
    Y{0,oo} = -sigma_* X{0,oo} first."""
    for c, u, v in base:
        if (u[0] % N, u[1] % N) == (0, 0):
            raise ValueError("base support contains u = (0,0)")
    phi0 = PhiCombo.from_list(N, base)
    out = PhiCombo(N, {})
    for t in terms:
        g, c = t.g, t.coefficient
        if t.base == "Y":
            g, c = matmul(g, SIGMA), -c
        out = out + phi0.pull(mat_mod(g, N)).scale(c)
    return out


# ---------------------------------------------------------- convergence

def _log_class(b, N):
    b %= N
    return min(b, (-b) % N)


@dataclass
class ConvergenceResult:
    xConverges: bool
    yConverges: bool
    detail: dict = field(default_factory=dict)


def _conditions(phi):
    N = phi.N
    c1 = Fraction(0)
    logs = {}
    for (u, v), c in phi.coeffs.items():
        b3 = bernoulli_frac(3, Fraction(v[0], N))
        c1 += c * bernoulli_frac(2, Fraction(u[0], N)) * b3
        if u[0] == 0:
            k = _log_class(u[1], N)
            logs[k] = logs.get(k, 0) + c * b3
    logs = {k: v for k, v in logs.items() if v}
    num = sum(float(v) * math.log(abs(1 - cmath.exp(2j * math.pi * k / N))) for k, v in logs.items())
    if logs and abs(num) < 1e-12:
        warnings.warn("log|1 - zeta^b| combination vanishes numerically but not formally")
    return c1, logs, num


def convergence_check(phi):
    """Absolute convergence of the integral over X{0,oo} and Y{0,oo}."""
    c1, logs, num = _conditions(phi)
    c1s, logss, nums = _conditions(phi.bar(mat_mod(SIGMA, phi.N)))
    return ConvergenceResult(
        c1 == 0 and not logs, c1s == 0 and not logss,
        {"cond1": c1, "cond2": logs, "cond2_numeric": num,
         "cond1_sigma": c1s, "cond2_sigma": logss, "cond2_sigma_numeric": nums})


# -------------------------------------------------------------- residues
#
# Formal residue expressions are dicts keyed by
#   ("a2L", b): coefficient of alpha^2 pi^2 log|1 - zeta^b|
#   ("a1Z", d): coefficient of alpha pi i Zhat(d), Zhat(d) = zhat(-d/N,2) - zhat(d/N,2)
#   ("a1L", b): coefficient of alpha pi^2 log|1 - zeta^b|   (Y fibre)

def _zhat_class(d, N):
    d %= N
    nd = (-d) % N
    if d == nd:
        return None, 0
    return (d, 1) if d < nd else (nd, -1)


def residue_limit(u, v, N, fiber="X"):
    """lim_{y -> oo} of the integral over fiber{iy, alpha + iy} of Eis^{0,1}(u, v)."""
    a, b = u[0] % N, u[1] % N
    c, d = v[0] % N, v[1] % N
    if (a, b) == (0, 0):
        raise ValueError("u = (0,0)")
    out = {}
    b3 = bernoulli_frac(3, Fraction(c, N))
    if fiber == "X":
        if a == 0 and b3:
            k = ("a2L", _log_class(b, N))
            out[k] = out.get(k, 0) - Fraction(4, N * N) * b3
        if c == 0:
            rep, s = _zhat_class(d, N)
            b2 = bernoulli_frac(2, Fraction(a, N))
            if s and b2:
                k = ("a1Z", rep)
                out[k] = out.get(k, 0) + s * Fraction(3, N * N) * b2
    elif fiber == "Y":
        if a == 0 and b3:
            k = ("a1L", _log_class(b, N))
            out[k] = out.get(k, 0) - Fraction(8, N * N) * b3
    else:
        raise ValueError("fiber must be X or Y")
    return out


def residue_sum(pairs, N, matrices=None):
    """Residues of g^* sum c Eis^{0,1}(u,v) for each g; returns the first
    nonzero one as (g, fiber, expression), or None if all vanish.

    pairs: list of (c, u, v). matrices defaults to all of GL2(Z/N)."""
    for g in (matrices if matrices is not None else gl2(N)):
        for fiber in ("X", "Y"):
            tot = {}
            for c, u, v in pairs:
                for k, w in residue_limit(_vec_mat(u, g, N), _vec_mat(v, g, N), N, fiber).items():
                    tot[k] = tot.get(k, 0) + c * w
            tot = {k: w for k, w in tot.items() if w}
            if tot:
                return g, fiber, tot
    return None


def cusp_matrices(cusps, N):
    """Reductions mod N of the gamma in SL2(Z) sending oo to the given cusps,
    with all translations and signs."""
    from .siegel import cusp_matrix
    out = set()
    for cp in cusps:
        c = cusp(cp)
        g0 = cusp_matrix(c[0], c[1])
        for k in range(N):
            for s in (1, -1):
                g = matmul(g0, ((s, k), (0, s)))
                out.add(mat_mod(g, N))
    return sorted(out)


def corollary_condition(b, b2, d, N):
    """d a multiple of b and b2 in Z/N, and b = +-b2 mod gcd(d, N)."""
    g = math.gcd(d % N, N)
    mult = (d % N) % math.gcd(b % N, N) == 0 and (d % N) % math.gcd(b2 % N, N) == 0
    return mult and ((b - b2) % g == 0 or (b + b2) % g == 0)


def residue_trivial_check(b, b2, d, N):
    """Trivial residues of Eis^{0,1}((0,b),(0,d)) - Eis^{0,1}((0,b2),(0,d)).

    The divisibility criterion is cross-checked by the exact residue sum over
    all of GL2(Z/N); a criterion that holds while residues survive is a bug."""
    crit = corollary_condition(b, b2, d, N)
    if (b - b2) % N == 0:
        return True
    res = residue_sum([(1, (0, b), (0, d)), (-1, (0, b2), (0, d))], N)
    if crit and res is not None:
        raise RuntimeError("residue criterion holds but a residue survives: %r" % (res,))
    return crit
