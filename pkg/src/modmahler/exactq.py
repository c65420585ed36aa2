"""Exact arithmetic: cyclotomic numbers, q-series with rational exponents,
and Laurent polynomials in three variables."""

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache

from sympy import cyclotomic_poly, divisors, totient
from sympy.abc import x as _x


# ---------------------------------------------------------------- cyclotomic

@lru_cache(maxsize=None)
def _phi(n):
    return int(totient(n))


@lru_cache(maxsize=None)
def _power_table(n):
    """Row k = coordinates of zeta_n^k (0 <= k < 2n) in the power basis."""
    d = _phi(n)
    poly = [int(c) for c in cyclotomic_poly(n, _x, polys=True).all_coeffs()][::-1]
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(2 * n):
        rows.append(tuple(cur))
        # multiply by zeta and reduce with the monic cyclotomic polynomial
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * poly[i]
    return rows


def _solve(mat, rhs):
    """Gaussian elimination over Q; None if singular."""
    n = len(mat)
    a = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


class Cyclotomic:
    """Element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""

    __slots__ = ("n", "c")

    def __init__(self, n, coeffs=None):
        self.n = int(n)
        d = _phi(self.n)
        if coeffs is None:
            coeffs = [0] * d
        coeffs = [Fraction(v) for v in coeffs]
        if len(coeffs) != d:
            raise ValueError("expected %d coefficients for order %d" % (d, n))
        self.c = tuple(coeffs)

    @classmethod
    def from_exponents(cls, n, terms):
        """terms: dict k -> rational, meaning sum of c*zeta_n^k."""
        tab = _power_table(n)
        acc = [Fraction(0)] * _phi(n)
        for k, v in terms.items():
            if v:
                row = tab[k % n]
                for i, r in enumerate(row):
                    if r:
                        acc[i] += v * r
        return cls(n, acc)

    @classmethod
    def zeta(cls, n, k=1):
        return cls.from_exponents(n, {k: 1})

    @classmethod
    def rational(cls, v, n=1):
        return cls.from_exponents(n, {0: Fraction(v)})

    # structure
    def lift(self, m):
        if m % self.n:
            raise ValueError("cannot lift order %d to %d" % (self.n, m))
        s = m // self.n
        return Cyclotomic.from_exponents(m, {k * s: v for k, v in enumerate(self.c) if v})

    def is_rational(self):
        return all(v == 0 for v in self.c[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.c[0]

    def minimal(self):
        """Same element expressed over the smallest cyclotomic order containing it."""
        if self.is_rational():
            return Cyclotomic(1, [self.c[0]])
        for d in divisors(self.n):
            if d == self.n:
                break
            k = _phi(d)
            if k >= _phi(self.n):
                continue
            # columns: zeta_d^j lifted to order n
            cols = [Cyclotomic.zeta(d, j).lift(self.n).c for j in range(k)]
            # solve least-squares style: use first k independent rows
            sub = _subfield_coords(self, cols)
            if sub is not None:
                return Cyclotomic(d, sub)
        return self

    def __complex__(self):
        w = cmath.exp(2j * math.pi / self.n)
        return complex(sum(float(v) * w ** k for k, v in enumerate(self.c) if v))

    def conj(self):
        return Cyclotomic.from_exponents(self.n, {-k: v for k, v in enumerate(self.c) if v})

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self, other
            m = math.lcm(self.n, other.n)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.n)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyclotomic(a.n, [u + v for u, v in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-v for v in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [v * other for v in self.c])
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        terms = {}
        for i, u in enumerate(a.c):
            if u:
                for j, v in enumerate(b.c):
                    if v:
                        terms[i + j] = terms.get(i + j, 0) + u * v
        return Cyclotomic.from_exponents(a.n, terms)

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.c):
            raise ZeroDivisionError("zero cyclotomic")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.c[0], self.n)
        d = _phi(self.n)
        # columns are self * zeta^j
        cols = [(self * Cyclotomic.zeta(self.n, j)).c for j in range(d)]
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        y = _solve(mat, [1] + [0] * (d - 1))
        return Cyclotomic(self.n, y)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclotomic.rational(1, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._coerce(other)
        return a.c == b.c

    def __hash__(self):
        m = self.minimal()
        if m.n == 1:
            return hash(m.c[0])
        return hash((m.n, m.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        m = self.minimal()
        if m.n == 1:
            return str(m.c[0])
        parts = []
        for k, v in enumerate(m.c):
            if v:
                parts.append("%s*z%d^%d" % (v, m.n, k) if k else str(v))
        return "(" + " + ".join(parts) + ")"


def _subfield_coords(x, cols):
    """Coordinates of x in the span of cols, or None."""
    k = len(cols)
    n = len(x.c)
    # pick k rows giving a nonsingular square system, then verify all rows
    rows = []
    for i in range(n):
        trial = rows + [i]
        mat = [[cols[j][r] for j in range(k)] for r in trial]
        if _rank(mat) == len(trial):
            rows = trial
        if len(rows) == k:
            break
    if len(rows) < k:
        return None
    mat = [[cols[j][r] for j in range(k)] for r in rows]
    y = _solve(mat, [x.c[r] for r in rows])
    if y is None:
        return None
    for r in range(n):
        if sum(y[j] * cols[j][r] for j in range(k)) != x.c[r]:
            return None
    return y


def _rank(mat):
    a = [list(map(Fraction, row)) for row in mat]
    rank = 0
    ncol = len(a[0]) if a else 0
    for col in range(ncol):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[rank])]
        rank += 1
    return rank


def cyc_reduce(n, terms):
    """Canonical representative of sum c_k zeta_n^k given as dict k -> c."""
    return Cyclotomic.from_exponents(n, terms)


def zeta(n, k=1):
    return Cyclotomic.zeta(n, k)


def to_complex(v):
    if isinstance(v, Cyclotomic):
        return complex(v)
    return complex(float(v))


def is_zero(v):
    if isinstance(v, Cyclotomic):
        return not any(v.c)
    return v == 0


# ------------------------------------------------------------------- q-series

DEFAULT_TERMS = 64


class QSeries:
    """Truncated series sum c_k q^(k/M).

    coeffs maps integer k to the coefficient of q^(k/M); every exponent
    k/M < prec/M is known, the rest is not."""

    __slots__ = ("M", "coeffs", "prec")

    def __init__(self, M, coeffs, prec):
        self.M = int(M)
        self.prec = prec  # integer numerator, or None for exact (polynomial)
        self.coeffs = {k: v for k, v in coeffs.items()
                       if not is_zero(v) and (prec is None or k < prec)}

    @classmethod
    def from_exponents(cls, terms, order=None):
        """terms: dict rational exponent -> coeff; order: rational truncation."""
        den = 1
        for e in terms:
            den = math.lcm(den, Fraction(e).denominator)
        if order is not None:
            den = math.lcm(den, Fraction(order).denominator)
        co = {}
        for e, v in terms.items():
            k = int(Fraction(e) * den)
            co[k] = co.get(k, 0) + v
        prec = None if order is None else int(Fraction(order) * den)
        return cls(den, co, prec)

    @classmethod
    def constant(cls, v, order=None):
        return cls.from_exponents({0: v}, order)

    # basic views
    @property
    def order(self):
        """Truncation as a rational exponent (None if exact)."""
        return None if self.prec is None else Fraction(self.prec, self.M)

    def items(self):
        """(rational exponent, coeff) pairs in increasing order."""
        return [(Fraction(k, self.M), self.coeffs[k]) for k in sorted(self.coeffs)]

    def coeff(self, e):
        e = Fraction(e)
        if self.prec is not None and e >= self.order:
            raise ValueError("exponent %s beyond truncation %s" % (e, self.order))
        k = e * self.M
        if k.denominator != 1:
            return 0
        return self.coeffs.get(int(k), 0)

    def valuation(self):
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.M)

    def _relattice(self, M):
        s = M // self.M
        return QSeries(M, {k * s: v for k, v in self.coeffs.items()},
                       None if self.prec is None else self.prec * s)

    def _common(self, other):
        if not isinstance(other, QSeries):
            other = QSeries.constant(other)
        M = math.lcm(self.M, other.M)
        return self._relattice(M), other._relattice(M)

    @staticmethod
    def _minprec(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    # arithmetic
    def __add__(self, other):
        a, b = self._common(other)
        co = dict(a.coeffs)
        for k, v in b.coeffs.items():
            co[k] = co.get(k, 0) + v
        return QSeries(a.M, co, self._minprec(a.prec, b.prec))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.M, {k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return QSeries(self.M, {k: v * c for k, v in self.coeffs.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.scale(other)
        a, b = self._common(other)
        va = min(a.coeffs) if a.coeffs else None
        vb = min(b.coeffs) if b.coeffs else None
        # product known below min(prec_a + val_b, prec_b + val_a)
        cands = []
        if a.prec is not None:
            cands.append(a.prec + (vb if vb is not None else 0))
        if b.prec is not None:
            cands.append(b.prec + (va if va is not None else 0))
        prec = min(cands) if cands else None
        co = {}
        bi = sorted(b.coeffs.items())
        for i, u in a.coeffs.items():
            for j, v in bi:
                k = i + j
                if prec is not None and k >= prec:
                    break
                co[k] = co.get(k, 0) + u * v
        return QSeries(a.M, co, prec)

    def __rmul__(self, other):
        return self * other

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("zero series")
        if self.prec is None:
            raise ValueError("inverse of an exact series needs a truncation")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        inv_lead = lead.inverse() if isinstance(lead, Cyclotomic) else 1 / Fraction(lead)
        n = self.prec - v  # relative precision
        h = {k - v: c for k, c in self.coeffs.items()}
        out = {0: inv_lead}
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                hj = h.get(j)
                if hj is not None:
                    ok = out.get(k - j)
                    if ok is not None:
                        s = s + hj * ok
            if not is_zero(s):
                out[k] = -(s * inv_lead)
        return QSeries(self.M, {k - v: c for k, c in out.items()}, n - v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self.scale(other.inverse())
        return self * other.inverse()

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        out = QSeries.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def truncate(self, order):
        """Drop everything at exponent >= order."""
        order = Fraction(order)
        M = math.lcm(self.M, order.denominator)
        a = self._relattice(M)
        p = int(order * M)
        if a.prec is not None:
            p = min(p, a.prec)
        return QSeries(M, a.coeffs, p)

    def rescale(self, t):
        """q -> q^t, i.e. F(tau) -> F(t*tau)."""
        t = Fraction(t)
        M = self.M * t.denominator
        co = {k * t.numerator: v for k, v in self.coeffs.items()}
        prec = None if self.prec is None else self.prec * t.numerator
        out = QSeries(M, co, prec)
        return out.normalized()

    def normalized(self):
        """Smallest lattice 1/M holding all exponents and the truncation."""
        g = 0
        for k in self.coeffs:
            g = math.gcd(g, k)
        if self.prec is not None:
            g = math.gcd(g, self.prec)
        g = math.gcd(g, self.M)
        if g <= 1:
            return self
        return QSeries(self.M // g, {k // g: v for k, v in self.coeffs.items()},
                       None if self.prec is None else self.prec // g)

    def map_coeffs(self, fn):
        return QSeries(self.M, {k: fn(v) for k, v in self.coeffs.items()}, self.prec)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._common(other)
        if a.prec != b.prec:
            return False
        d = a - b
        return d.is_zero()

    def agrees_with(self, other):
        """Equality on the common window of validity."""
        d = self - other
        return d.is_zero()

    def eval(self, tau, growth=None):
        """Partial sum at tau plus a tail bound.

        growth(e) should bound |coefficient| at exponent e; without it the
        tail is reported as unbounded (bound None)."""
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        s = 0j
        for k, v in self.coeffs.items():
            s += to_complex(v) * cmath.exp(2j * math.pi * tau * k / self.M)
        if self.prec is None:
            return s, 0.0
        if growth is None:
            return s, None
        r = math.exp(-2 * math.pi * tau.imag / self.M)
        # sum_{k >= prec} growth(k/M) r^k, bounded by a ratio test on the first terms
        tail = 0.0
        k = self.prec
        term = growth(Fraction(k, self.M)) * r ** k
        while True:
            tail += term
            k += 1
            nxt = growth(Fraction(k, self.M)) * r ** k
            if nxt < 1e-30 * max(tail, 1e-300) or k > self.prec + 100000:
                break
            if nxt <= 0.5 * term and k > self.prec + 50:
                tail += nxt / (1 - nxt / term)
                break
            term = nxt
        return s, tail

    def __repr__(self):
        parts = []
        for e, v in self.items()[:12]:
            parts.append("%s*q^%s" % (v, e))
        tail = "" if self.prec is None else " + O(q^%s)" % self.order
        return " + ".join(parts) + tail if parts else "0" + tail


def qvar(order=DEFAULT_TERMS):
    return QSeries(1, {1: 1}, int(order))


# ------------------------------------------------------ Laurent polynomials

class LaurentPoly3:
    """Laurent polynomial in three variables with rational coefficients."""

    def __init__(self, terms=None, names=("X", "Y", "Z")):
        self.names = tuple(names)
        self.terms = {}
        for k, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                self.terms[tuple(k)] = self.terms.get(tuple(k), 0) + v
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, i):
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    def with_names(self, names):
        self.names = tuple(names)
        return self

    def __add__(self, other):
        if not isinstance(other, LaurentPoly3):
            other = LaurentPoly3.const(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return LaurentPoly3(t, self.names)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly3({k: -v for k, v in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly3):
            other = LaurentPoly3.const(other)
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                t[k] = t.get(k, 0) + v1 * v2
        return LaurentPoly3(t, self.names)

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (k, v), = self.terms.items()
            return LaurentPoly3({(k[0] * e, k[1] * e, k[2] * e): v ** e}, self.names)
        out = LaurentPoly3.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __truediv__(self, other):
        if not isinstance(other, LaurentPoly3):
            return self * LaurentPoly3.const(1 / Fraction(other))
        return self * other ** -1

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly3):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def degree_range(self, i):
        es = [k[i] for k in self.terms]
        return min(es), max(es)

    def coefficients_in(self, i):
        """dict power -> LaurentPoly3 in the other variables (var i set to 0 power)."""
        out = {}
        for k, v in self.terms.items():
            kk = list(k)
            p = kk[i]
            kk[i] = 0
            out.setdefault(p, {})[tuple(kk)] = v
        return {p: LaurentPoly3(t, self.names) for p, t in out.items()}

    def evaluate(self, x, y, z):
        s = 0
        for (i, j, k), v in self.terms.items():
            s += float(v) * x ** i * y ** j * z ** k
        return s

    def permute(self, perm):
        """New polynomial whose variable perm[i] is the old variable i."""
        t = {}
        for k, v in self.terms.items():
            nk = [0, 0, 0]
            for i in range(3):
                nk[perm[i]] = k[i]
            t[tuple(nk)] = v
        return LaurentPoly3(t, self.names)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            v = self.terms[k]
            mono = "*".join("%s^%d" % (n, e) for n, e in zip(self.names, k) if e)
            parts.append("%s*%s" % (v, mono) if mono else str(v))
        return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def parse_poly(text, names=("X", "Y", "Z")):
    """Parse expressions like 'X + 1/X + Y + 1/Y + Z + 1/Z - 2' or
    '(X+1)^2*(Y+1)^2*(Z^3+Z) - 2*(Z+1)^4*X*Y'. Division is allowed by
    monomials and constants."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse near %r" % text[pos:pos + 10])
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", Fraction(num)))
        elif name is not None:
            if name not in names:
                raise ValueError("unknown variable %r" % name)
            toks.append(("var", names.index(name)))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    toks.append(("end", None))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        v = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            w = term()
            v = v + w if op == "+" else v - w
        return v

    def term():
        v = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            w = unary()
            v = v * w if op == "*" else v / w
        return v

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        v = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, e = take()
            if kind != "num" or e.denominator != 1:
                raise ValueError("exponent must be an integer")
            v = v ** (sign * int(e))
        return v

    def atom():
        kind, val = take()
        if kind == "num":
            return LaurentPoly3.const(val).with_names(names)
        if kind == "var":
            return LaurentPoly3.var(val).with_names(names)
        if (kind, val) == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return v
        raise ValueError("unexpected token %r" % (val,))

    out = expr()
    if peek()[0] != "end":
        raise ValueError("trailing input")
    return out

