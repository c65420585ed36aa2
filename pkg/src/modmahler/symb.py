"""Group-algebra bookkeeping on (Z/N)^2: divisors, the product mu, the
projector Pi_eps, the horospherical map and Eisenstein-symbol coefficients."""

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .eis import bernoulli_poly, frac_part


def _pt(u, N):
    return (u[0] % N, u[1] % N)


def _neg(u, N):
    return ((-u[0]) % N, (-u[1]) % N)


def _add(u, v, N):
    return ((u[0] + v[0]) % N, (u[1] + v[1]) % N)


def _clean(d):
    return {k: v for k, v in d.items() if v}


@dataclass
class TorsionDivisor:
    """Formal Q-combination of points of (Z/N)^2."""
    N: int
    points: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = {}
        for u, c in self.points.items():
            u = _pt(u, self.N)
            pts[u] = pts.get(u, 0) + Fraction(c)
        self.points = _clean(pts)

    @classmethod
    def from_json(cls, data):
        pts = {}
        for key, c in data["points"].items():
            a, b = (int(x) for x in re.findall(r"-?\d+", key))
            pts[(a, b)] = Fraction(c)
        return cls(int(data["N"]), pts)

    def to_json(self):
        return {"N": self.N, "points": {"(%d,%d)" % u: str(c) for u, c in sorted(self.points.items())}}

    def degree(self):
        return sum(self.points.values(), Fraction(0))

    def is_degree_zero(self):
        return self.degree() == 0

    def __add__(self, other):
        d = dict(self.points)
        for u, c in other.points.items():
            d[u] = d.get(u, 0) + c
        return TorsionDivisor(self.N, d)

    def __neg__(self):
        return TorsionDivisor(self.N, {u: -c for u, c in self.points.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TorsionDivisor(self.N, {u: c * v for u, v in self.points.items()})

    def translate(self, a):
        return TorsionDivisor(self.N, {_add(u, a, self.N): c for u, c in self.points.items()})

    def iota(self):
        """Negate the points (divisor of iota^* f)."""
        return TorsionDivisor(self.N, {_neg(u, self.N): c for u, c in self.points.items()})

    def __eq__(self, other):
        return isinstance(other, TorsionDivisor) and self.N == other.N and self.points == other.points

    def __str__(self):
        if not self.points:
            return "0"
        return " + ".join("%s(%d,%d)" % (c, *u) for u, c in sorted(self.points.items()))


def point(u, N, c=1):
    return TorsionDivisor(N, {u: c})


def all_points(N):
    return list(itertools.product(range(N), repeat=2))


def d_zero(N):
    """N^2 [0] - sum_u [u]."""
    d = {u: Fraction(-1) for u in all_points(N)}
    d[(0, 0)] += N * N
    return TorsionDivisor(N, d)


def mu_product(d1, d2):
    """Convolution product in Q[(Z/N)^2]."""
    if d1.N != d2.N:
        raise ValueError("level mismatch")
    N = d1.N
    out = {}
    for u, a in d1.points.items():
        for v, b in d2.points.items():
            w = _add(u, v, N)
            out[w] = out.get(w, 0) + a * b
    return TorsionDivisor(N, out)


# ---------------------------------------------------------------- tensors
#
# A tensor is a dict {(u, v): coefficient} standing for sum c [u] (x) [v].

def tensor(d0, d1):
    if d0.N != d1.N:
        raise ValueError("level mismatch")
    out = {}
    for u, a in d0.points.items():
        for v, b in d1.points.items():
            out[(u, v)] = out.get((u, v), 0) + a * b
    return _clean(out)


def act_translation(a, x, N):
    """a . (d0 (x) d1) = [a]d0 (x) [-a]d1."""
    ma = _neg(a, N)
    return {(_add(u, a, N), _add(v, ma, N)): c for (u, v), c in x.items()}


def act_minus(x):
    """(-1) . (d0 (x) d1) = -(d1 (x) d0)."""
    return {(v, u): -c for (u, v), c in x.items()}


def pi_epsilon(x, N, eps=-1):
    """(1/|H|) sum_h eps(h) h.x for H = (Z/N)^2 x {+-1}."""
    out = {}
    sw = act_minus(x)
    for a in all_points(N):
        for part, w in ((x, 1), (sw, eps)):
            for key, c in act_translation(a, part, N).items():
                out[key] = out.get(key, 0) + w * c
    h = 2 * N * N
    return _clean({k: Fraction(v) / h for k, v in out.items()})


def mu_tensor(x, N):
    """mu applied to a tensor."""
    out = {}
    for (u, v), c in x.items():
        w = _add(u, v, N)
        out[w] = out.get(w, 0) + c
    return TorsionDivisor(N, out)


def theta(d, eps=-1):
    """theta(d) = Pi_eps(d (x) d_0); mu o theta = N^2 on degree-0 divisors."""
    return pi_epsilon(tensor(d, d_zero(d.N)), d.N, eps)


# ----------------------------------------------------- horospherical map

def gl2(N):
    """All of GL2(Z/N) as ((a,b),(c,d))."""
    from math import gcd
    out = []
    for a, b, c, d in itertools.product(range(N), repeat=4):
        if gcd((a * d - b * c) % N, N) == 1:
            out.append(((a, b), (c, d)))
    return out


def _inv_mod(g, N):
    (a, b), (c, d) = g
    det = pow((a * d - b * c) % N, -1, N)
    return ((d * det % N, -b * det % N), (-c * det % N, a * det % N))


def _mat_vec(g, x, N):
    (a, b), (c, d) = g
    return ((a * x[0] + b * x[1]) % N, (c * x[0] + d * x[1]) % N)


@dataclass
class HoroFunction:
    """Function on GL2(Z/N), left invariant under (* *; 0 1), with f(-g) = sign f(g).

    Values are stored on canonical coset representatives, indexed by the
    bottom row of g (which determines the coset)."""
    N: int
    sign: int
    values: dict  # bottom row (c, d) -> Fraction

    def __call__(self, g):
        return self.values.get(_pt(g[1], self.N), Fraction(0))

    def is_zero(self):
        return not any(self.values.values())

    def check_invariants(self):
        N = self.N
        for (c, d), v in self.values.items():
            if self.values.get(_neg((c, d), N), Fraction(0)) != self.sign * v:
                return False
        return True


def horospherical(k, d):
    """lambda^k(phi)(g) = sum_x phi(g^-1 x) B_{k+2}({x_2/N}), exact."""
    if k < 0:
        raise ValueError("k must be >= 0")
    N = d.N
    B = [bernoulli_poly(k + 2, Fraction(j, N)) for j in range(N)]
    rows = sorted({g[1] for g in gl2(N)})
    vals = {}
    for row in rows:
        c, e = row
        # with x = g y, x_2 = c y_1 + e y_2 only depends on the bottom row
        s = Fraction(0)
        for (y1, y2), w in d.points.items():
            s += w * B[(c * y1 + e * y2) % N]
        vals[row] = s
    return HoroFunction(N, (-1) ** k, _clean(vals))


def horospherical_bruteforce(k, d, g):
    """The defining double sum at a single g, for cross-checking."""
    N = d.N
    gi = _inv_mod(g, N)
    s = Fraction(0)
    for x in all_points(N):
        s += d.points.get(_mat_vec(gi, x, N), 0) * bernoulli_poly(k + 2, frac_part(Fraction(x[1], N)))
    return s


def horo_space_dim(N, sign):
    """dim V_N^sign: orbits of primitive bottom rows under +-1."""
    rows = sorted({g[1] for g in gl2(N)})
    seen = set()
    n = 0
    for r in rows:
        if r in seen:
            continue
        nr = _neg(r, N)
        seen.update((r, nr))
        if r == nr and sign == -1:
            continue
        n += 1
    return n


# ------------------------------------------------------- Eisenstein combos

@dataclass
class EisCombo:
    """sum c_u Eis^k(u), normalised by Eis^k(-u) = (-1)^k Eis^k(u)."""
    weight: int
    N: int
    coeffs: dict = field(default_factory=dict)
    sign_ambiguous: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        out = {}
        for u, c in self.coeffs.items():
            u = _pt(u, self.N)
            r, s = self.normalize_index(u)
            if s:
                out[r] = out.get(r, 0) + s * Fraction(c)
        self.coeffs = _clean(out)

    def normalize_index(self, u):
        """Representative of u up to sign, with the sign picked up."""
        nu = _neg(u, self.N)
        if u == (0, 0) and self.weight % 2:
            return u, 0
        if nu < u:
            return nu, (-1) ** self.weight
        if nu == u and self.weight % 2:
            return u, 0
        return u, 1

    @classmethod
    def from_json(cls, data):
        pts = {}
        for key, c in data["coeffs"].items():
            a, b = (int(x) for x in re.findall(r"-?\d+", key))
            pts[(a, b)] = Fraction(c)
        return cls(int(data["weight"]), int(data["N"]), pts, bool(data.get("sign_ambiguous", False)))

    def to_json(self):
        return {"weight": self.weight, "N": self.N, "sign_ambiguous": self.sign_ambiguous,
                "coeffs": {"(%d,%d)" % u: str(c) for u, c in sorted(self.coeffs.items())}}

    def scale(self, c):
        return EisCombo(self.weight, self.N, {u: c * v for u, v in self.coeffs.items()},
                        self.sign_ambiguous, dict(self.meta))

    def __eq__(self, other):
        return (isinstance(other, EisCombo) and self.weight == other.weight
                and self.N == other.N and self.coeffs == other.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        s = " + ".join("%s*Eis%d(%d,%d)" % (c, self.weight, *u) for u, c in sorted(self.coeffs.items()))
        return ("+-(%s)" % s) if self.sign_ambiguous else s


def milnor_to_eis(div_iota_x, div_y):
    """Coefficient of the Milnor symbol {X,Y} as +-(N/3) sum_u mu(u) Eis^1(u)."""
    if not (div_iota_x.is_degree_zero() and div_y.is_degree_zero()):
        raise ValueError("divisors of a Milnor symbol must have degree 0")
    N = div_iota_x.N
    m = mu_product(div_iota_x, div_y)
    c = Fraction(N, 3)
    return EisCombo(1, N, {u: c * v for u, v in m.points.items()}, sign_ambiguous=True)


def unit_to_eis0(F):
    """log|F| as sum c_i (N/2) Eis^0(a_i,b_i); the prefactor is kept as metadata."""
    coeffs = {}
    for (a, b), c in F.factors:
        if (a % F.N, b % F.N) == (0, 0):
            raise ValueError("index (0,0) in a unit product")
        coeffs[(a, b)] = coeffs.get((a, b), 0) + Fraction(F.N, 2) * c
    return EisCombo(0, F.N, coeffs, meta={"prefactor": F.prefactor_cyc()})
