"""Bernoulli numbers, Dirichlet characters and the Eisenstein series used in
the weight-3 identifications, plus the frozen newform tables."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from sympy import factorint, primitive_root

from .exactq import Cyclotomic, QSeries, is_zero, zeta


# ------------------------------------------------------------------ Bernoulli

@lru_cache(maxsize=None)
def bernoulli_number(n):
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    s = Fraction(0)
    for k in range(n):
        s += math.comb(n + 1, k) * bernoulli_number(k)
    return -s / (n + 1)


def bernoulli_poly(k, x):
    x = Fraction(x)
    return sum(math.comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1))


def frac_part(x):
    x = Fraction(x)
    return x - math.floor(x)


def bernoulli_frac(k, x):
    """B_k({x})."""
    return bernoulli_poly(k, frac_part(x))


def P1(x):
    """B_1({x}) for non-integral x, 0 on integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return frac_part(x) - Fraction(1, 2)


# ----------------------------------------------------------------- characters

@lru_cache(maxsize=None)
def _unit_group_gens(m):
    """Generators of (Z/m)^* with their orders, one (or two for 2^k) per prime power."""
    gens = []
    for p, k in factorint(m).items():
        pk = p ** k
        rest = m // pk
        if p == 2:
            local = []
            if k >= 2:
                local.append((pk - 1, 2))  # -1
            if k >= 3:
                local.append((5, pk // 4))
        else:
            local = [(int(primitive_root(pk)), pk - pk // p)]
        for g, order in local:
            # lift g mod pk to something that is 1 mod rest
            x = _crt(g, pk, 1, rest)
            gens.append((x, order, pk))
    return gens


def _crt(a, m, b, n):
    if n == 1:
        return a % m
    t = ((b - a) * pow(m, -1, n)) % n
    return (a + m * t) % (m * n)


@dataclass(frozen=True)
class DirichletChar:
    """Character mod `modulus` given by exponents on the standard generators
    (chi(g_j) = exp(2 pi i e_j / ord_j))."""
    modulus: int
    exps: tuple

    @property
    def gens(self):
        return _unit_group_gens(self.modulus)

    @property
    def order(self):
        o = 1
        for (g, og, _), e in zip(self.gens, self.exps):
            o = math.lcm(o, og // math.gcd(og, e))
        return o

    @lru_cache(maxsize=None)
    def _table(self):
        m = self.modulus
        if m == 1:
            return {0: (0, 1)}
        gens = self.gens
        # discrete log table: element -> exponent vector
        tab = {1 % m: tuple([0] * len(gens))}
        for j, (g, og, _) in enumerate(gens):
            new = {}
            for x, vec in tab.items():
                y = x
                for e in range(og):
                    v = list(vec)
                    v[j] = e
                    new[y] = tuple(v)
                    y = (y * g) % m
            tab = new
        L = 1
        for (g, og, _) in gens:
            L = math.lcm(L, og)
        out = {}
        for x, vec in tab.items():
            num = sum(e * ej * (L // og) for e, ej, (g, og, _) in zip(vec, self.exps, gens))
            out[x] = (num % L, L)
        return out

    def __call__(self, n):
        """chi(n) as a Fraction when real, else a Cyclotomic."""
        m = self.modulus
        if math.gcd(n, m) != 1:
            return 0
        k, L = self._table()[n % m]
        if (2 * k) % L == 0:
            return 1 if k == 0 else -1
        return zeta(L, k)

    def is_real(self):
        return self.order <= 2

    def parity(self):
        v = self(self.modulus - 1) if self.modulus > 2 else 1
        return 1 if v == 1 else -1

    def conductor(self):
        m = self.modulus
        for p in factorint(m):
            d = m // p
            # induced from mod d iff trivial on units that are 1 mod d
            if all(self(x) == 1 for x in range(1, m, d) if math.gcd(x, m) == 1):
                return DirichletChar.conductor(_restrict(self, d))
        return m

    def is_primitive(self):
        return self.conductor() == self.modulus

    def conj(self):
        gens = self.gens
        return DirichletChar(self.modulus, tuple((-e) % og for e, (g, og, _) in zip(self.exps, gens)))

    def power(self, k):
        gens = self.gens
        return DirichletChar(self.modulus, tuple((e * k) % og for e, (g, og, _) in zip(self.exps, gens)))

    @property
    def label(self):
        if self.modulus == 1:
            return "1"
        if self.is_real():
            d = self.parity() * self.modulus
            return "chi%d" % d if d != -4 and d != -3 else "chi%d" % self.modulus
        return "chi[%d:%s]" % (self.modulus, ",".join(map(str, self.exps)))

    def __repr__(self):
        return self.label


def _restrict(chi, d):
    """The character mod d inducing chi (assumed to exist)."""
    for c in characters(d):
        if all(c(x) == chi(x) for x in range(1, chi.modulus) if math.gcd(x, chi.modulus) == 1):
            return c
    raise ValueError("not induced")


@lru_cache(maxsize=None)
def characters(m):
    if m == 1:
        return (DirichletChar(1, ()),)
    gens = _unit_group_gens(m)
    out = [()]
    for g, og, _ in gens:
        out = [v + (e,) for v in out for e in range(og)]
    return tuple(DirichletChar(m, v) for v in out)


@lru_cache(maxsize=None)
def primitive_characters(m):
    return tuple(c for c in characters(m) if c.is_primitive())


def trivial_char():
    return DirichletChar(1, ())


def char_by_label(label):
    """'1', 'chi4' (odd, conductor 4), 'chi3' (odd, conductor 3), 'chi8', 'chi-8', ..."""
    if label in ("1", "trivial"):
        return trivial_char()
    if label.startswith("chi") and not label.startswith("chi["):
        d = int(label[3:])
        if d in (3, 4):
            d = -d
        m = abs(d)
        for c in primitive_characters(m):
            if c.is_real() and c.parity() * m == d:
                return c
        raise ValueError("no real primitive character of discriminant %d" % d)
    if label.startswith("chi["):
        m, e = label[4:-1].split(":")
        return DirichletChar(int(m), tuple(int(v) for v in e.split(",")))
    raise ValueError("unknown character %r" % label)


def gen_bernoulli(k, chi):
    """Generalised Bernoulli number B_{k,chi}."""
    m = chi.modulus
    s = 0
    for a in range(1, m + 1):
        v = chi(a)
        if not is_zero(v):
            s = s + v * bernoulli_poly(k, Fraction(a, m))
    return s * Fraction(m) ** (k - 1)


def dirichlet_L_neg(chi, k):
    """L(chi, 1-k) = -B_{k,chi}/k (zeta for the trivial character mod 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    v = -gen_bernoulli(k, chi) / k
    if isinstance(v, Cyclotomic) and v.is_rational():
        return v.to_fraction()
    return v


def partial_zeta_neg(a, N, k):
    """sum_{m >= 1, m = a mod N} m^{-s} at s = 1-k, i.e. -N^{k-1} B_k(x)/k with x in (0,1]."""
    a %= N
    x = Fraction(a if a else N, N)
    return -Fraction(N) ** (k - 1) * bernoulli_poly(k, x) / k


# --------------------------------------------------------------- G series

def G_constant(k, a, b, N):
    """Constant term of G^(k)_{a,b}, taken as -L(G,0).

    For k = 2 and a = 0 only differences of these values are meaningful."""
    return -(partial_zeta_neg(a, N, k) * partial_zeta_neg(b, N, 1)
             + (-1) ** k * partial_zeta_neg(-a, N, k) * partial_zeta_neg(-b, N, 1))


class QuasiModularError(ValueError):
    pass


def G_qexp(k, a, b, N, order, allow_quasi=False):
    """G^(k)_{a,b} mod N with integer exponents below `order`."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    a %= N
    b %= N
    if k == 2 and a == 0 and not allow_quasi:
        raise QuasiModularError("G^(2)_{0,b} is quasi-modular; use a difference")
    co = {0: G_constant(k, a, b, N)}
    sgn = (-1) ** k
    for m in range(1, order):
        w = m ** (k - 1)
        ma = (m - a) % N == 0
        mb = (m + a) % N == 0
        if not (ma or mb):
            continue
        for n in range(1, (order - 1) // m + 1):
            if ma and (n - b) % N == 0:
                co[m * n] = co.get(m * n, 0) + w
            if mb and (n + b) % N == 0:
                co[m * n] = co.get(m * n, 0) + sgn * w
    return QSeries(1, co, order)


def G2_difference(b, b2, N, order):
    """G^(2)_{0,b} - G^(2)_{0,b2}, a genuine modular form."""
    return G_qexp(2, 0, b, N, order, True) - G_qexp(2, 0, b2, N, order, True)


# -------------------------------------------------------------- E3 series

@dataclass(frozen=True)
class E3Spec:
    phi: DirichletChar
    psi: DirichletChar
    t: int = 1

    def __post_init__(self):
        if self.phi.parity() * self.psi.parity() != -1:
            raise ValueError("E3 needs phi(-1) psi(-1) = -1")

    def level(self):
        return self.phi.modulus * self.psi.modulus * self.t

    @property
    def label(self):
        return "E3[%s,%s,%d]" % (self.phi.label, self.psi.label, self.t)

    def as_dict(self, coeff=None):
        d = {"phi": self.phi.label, "psi": self.psi.label, "t": self.t}
        if coeff is not None:
            d["coeff"] = str(coeff)
        return d


def E3_qexp(spec, order):
    """delta_{N1,1} L(psi,-2) + 2 sum phi(m) psi(n) n^2 q^{t m n}."""
    phi, psi, t = spec.phi, spec.psi, spec.t
    c0 = dirichlet_L_neg(psi, 3) if phi.modulus == 1 else 0
    co = {0: c0}
    for m in range(1, (order - 1) // t + 1):
        pm = phi(m)
        if is_zero(pm):
            continue
        for n in range(1, (order - 1) // (t * m) + 1):
            pn = psi(n)
            if is_zero(pn):
                continue
            e = t * m * n
            co[e] = co.get(e, 0) + 2 * pm * pn * n * n
    return QSeries(1, co, order)


def eisenstein_basis(M):
    """All E3 specs of level dividing M (phi, psi primitive)."""
    out = []
    for N1 in _divisors(M):
        for N2 in _divisors(M // N1):
            for phi in primitive_characters(N1):
                for psi in primitive_characters(N2):
                    if phi.parity() * psi.parity() != -1:
                        continue
                    for t in _divisors(M // (N1 * N2)):
                        out.append(E3Spec(phi, psi, t))
    return out


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------- newforms

@dataclass
class NewformTable:
    label: str
    level: int
    weight: int
    coeffs: list  # a_1 .. a_n

    def a(self, n):
        return self.coeffs[n - 1]

    def qexp(self, order):
        if order - 1 > len(self.coeffs):
            raise ValueError("table for %s has only %d coefficients" % (self.label, len(self.coeffs)))
        return QSeries(1, {n: self.coeffs[n - 1] for n in range(1, order)}, order)

    def check_multiplicative(self, limit=None):
        n_max = limit or len(self.coeffs)
        for m in range(2, n_max + 1):
            for n in range(m + 1, n_max // m + 1):
                if math.gcd(m, n) == 1 and self.a(m * n) != self.a(m) * self.a(n):
                    return False
        return True


@lru_cache(maxsize=None)
def _load_tables():
    text = resources.files("modmahler").joinpath("data/newforms.txt").read_text()
    tabs = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        label, level, weight = parts[0], int(parts[1]), int(parts[2])
        tabs[label] = NewformTable(label, level, weight, [int(v) for v in parts[3:]])
    return tabs


def newform_labels():
    return sorted(_load_tables())


def newform_coeffs(label, order=None):
    tabs = _load_tables()
    if label not in tabs:
        raise KeyError("unknown newform %r (known: %s)" % (label, ", ".join(sorted(tabs))))
    t = tabs[label]
    if order is None:
        return t
    return NewformTable(t.label, t.level, t.weight, t.coeffs[:order])


def newforms_at_level(M):
    """Labels of stored newforms whose level divides M."""
    return [l for l, t in sorted(_load_tables().items()) if M % t.level == 0]
