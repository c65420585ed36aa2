"""Rogers-Zudilin side: symbol data -> products G^(2) G^(1) -> a weight-3
q-expansion, identified exactly against newforms and E3 Eisenstein series."""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint

from .eis import E3_qexp, G_qexp, char_by_label, eisenstein_basis, newform_coeffs, newforms_at_level, E3Spec
from .exactq import Cyclotomic, QSeries, _phi


class UnbalancedError(ValueError):
    pass


class NotIdentifiedError(ValueError):
    pass


# --------------------------------------------------------------- products

@dataclass
class RZProduct:
    """sum c * G^(2)_{i2} * G^(1)_{i1} at level N."""
    N: int
    terms: list = field(default_factory=list)  # [(c, (d, a), (b, c'))]
    prefactor: str = "3/N^3 (2 pi)^2"

    def normalized(self):
        """Terms merged using G^(k)_{-i} = (-1)^k G^(k)_i."""
        N = self.N
        acc = {}
        for c, i2, i1 in self.terms:
            i2 = (i2[0] % N, i2[1] % N)
            i1 = (i1[0] % N, i1[1] % N)
            n2 = ((-i2[0]) % N, (-i2[1]) % N)
            n1 = ((-i1[0]) % N, (-i1[1]) % N)
            if n1 == i1:
                continue
            c = Fraction(c)
            if n2 < i2:
                i2 = n2
            if n1 < i1:
                i1, c = n1, -c
            acc[(i2, i1)] = acc.get((i2, i1), 0) + c
        return {k: v for k, v in acc.items() if v}

    def __eq__(self, other):
        return isinstance(other, RZProduct) and self.N == other.N and self.normalized() == other.normalized()

    def qexp(self, order):
        N = self.N
        cache = {}

        def G(k, idx):
            if (k, idx) not in cache:
                cache[(k, idx)] = G_qexp(k, idx[0], idx[1], N, order, allow_quasi=True)
            return cache[(k, idx)]
        out = QSeries(1, {}, order)
        for (i2, i1), c in sorted(self.normalized().items()):
            out = out + (G(2, i2) * G(1, i1)).scale(c)
        return out.truncate(order)

    def __str__(self):
        parts = ["%s*G2[%d,%d]*G1[%d,%d]" % (c, *i2, *i1) for (i2, i1), c in sorted(self.normalized().items())]
        return " + ".join(parts) if parts else "0"


def phi_to_F(phi):
    """[(a,b),(c,d)] -> G^(2)_{d,a} G^(1)_{b,-c} - G^(2)_{d,-a} G^(1)_{b,c}.

    Entries with d = 0 must come in families with the same b and v whose
    coefficients sum to zero."""
    N = phi.N
    fam = {}
    terms = []
    for ((a, b), (c, d)), lam in phi.items():
        if d == 0:
            fam[(b, (c, d))] = fam.get((b, (c, d)), 0) + lam
        terms.append((lam, (d, a), (b, -c)))
        terms.append((-lam, (d, -a), (b, c)))
    bad = {k: v for k, v in fam.items() if v}
    if bad:
        raise UnbalancedError("d = 0 entries not balanced: %s" % ", ".join(
            "b=%d v=(%d,%d) sum %s" % (b, v[0], v[1], s) for (b, v), s in sorted(bad.items())))
    return RZProduct(N, terms)


def support_gcd(F):
    g = 0
    for e, c in F.items():
        if e and c:
            if Fraction(e).denominator != 1:
                raise ValueError("fractional exponent %s" % e)
            g = math.gcd(g, int(e))
    return g or 1


def rescale_down(F, r, order):
    """F(tau / r) for F supported on multiples of r, below q^order."""
    out = {}
    for e, c in F.items():
        if c == 0:
            continue
        e = int(e)
        if e % r:
            raise ValueError("coefficient of q^%d is nonzero; F(tau/%d) is not a q-series" % (e, r))
        if e // r < order:
            out[e // r] = c
    return QSeries(1, out, order)


# --------------------------------------------------------- identification

def gamma1_index(M):
    if M <= 2:
        return (1, 3)[M - 1]
    idx = M * M
    for p in factorint(M):
        idx = idx * (p * p - 1) // (p * p)
    return idx


def sturm_bound(M, weight=3, margin=10):
    return math.ceil(Fraction(weight, 12) * gamma1_index(M)) + margin


def _coords(v, L):
    if isinstance(v, Cyclotomic):
        return list(v.lift(L).c) if L % v.n == 0 else list(v.minimal().lift(L).c)
    out = [Fraction(0)] * _phi(L)
    out[0] = Fraction(v)
    return out


def _row_reduce(cols, rhs):
    """Solve sum x_j cols[j] = rhs exactly; returns (x, rank, consistent)."""
    n = len(cols)
    m = len(rhs)
    a = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(m)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    consistent = all(a[i][n] == 0 for i in range(r, m))
    x = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        x[col] = a[i][n]
    return x, r, consistent


@dataclass
class FormIdentification:
    M: int
    rescale: int
    cusp: dict = field(default_factory=dict)  # label -> coefficient; label "f8" or "f8(2t)"
    eis: list = field(default_factory=list)  # [(coefficient, E3Spec)]
    residual: Fraction = Fraction(0)
    coefficients_used: int = 0
    constant_consistent: bool = True
    unique: bool = True

    def to_json(self):
        return {"level": self.M, "rescale": self.rescale,
                "cusp": {k: str(v) for k, v in self.cusp.items()},
                "eis": [sp.as_dict(c) for c, sp in self.eis],
                "residual": str(self.residual), "coefficients": self.coefficients_used,
                "constant_consistent": self.constant_consistent}

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)

    def __str__(self):
        parts = ["%s*%s" % (c, k) for k, c in self.cusp.items()]
        parts += ["%s*%s" % (c, sp.label) for c, sp in self.eis]
        return " + ".join(parts) if parts else "0"


def _basis(M, order):
    """Columns (name, kind, payload, series) spanning the candidate space."""
    cols = []
    for lab in newforms_at_level(M):
        f = newform_coeffs(lab)
        for d in range(1, M // f.level + 1):
            if (M // f.level) % d:
                continue
            s = f.qexp(order // d + 1).rescale(d).truncate(order)
            name = lab if d == 1 else "%s(%dt)" % (lab, d)
            cols.append((name, "cusp", (lab, d), s, 1))
    for sp in eisenstein_basis(M):
        s = E3_qexp(sp, order)
        if sp.phi.is_real() and sp.psi.is_real():
            cols.append((sp.label, "eis", sp, s, 1))
        else:
            L = math.lcm(sp.phi.order, sp.psi.order)
            for j in range(_phi(L)):
                cols.append((sp.label, "eis", sp, s, Cyclotomic.zeta(L, j)))
    return cols


def expand_and_identify(p, M, rescale=None, order=None):
    """Identify F(tau / rescale) in M_3(Gamma_1(M)) over Q.

    The linear system is solved on q^1 .. q^(order-1); the constant term is
    checked afterwards against the identified combination."""
    S = order or sturm_bound(M)
    r0 = rescale or support_gcd(p.qexp(2 * S + 1))
    F = p.qexp(S * r0 + 1)
    Gs = rescale_down(F, r0, S + 1)
    cols = _basis(M, S + 1)
    L = 1
    for _, _, _, s, beta in cols:
        for _, v in s.items():
            if isinstance(v, Cyclotomic):
                L = math.lcm(L, v.minimal().n)
        if isinstance(beta, Cyclotomic):
            L = math.lcm(L, beta.n)
    vecs = []
    for name, kind, payload, s, beta in cols:
        v = []
        for n in range(1, S + 1):
            c = s.coeff(n)
            c = c * beta if isinstance(beta, Cyclotomic) else c
            v.extend(_coords(c, L))
        vecs.append(v)
    rhs = []
    for n in range(1, S + 1):
        rhs.extend(_coords(Gs.coeff(n), L))
    x, rank, ok = _row_reduce(vecs, rhs)
    # residual on all coefficients used
    resid = Fraction(0)
    for i in range(len(rhs)):
        tot = sum((x[j] * vecs[j][i] for j in range(len(vecs)) if x[j]), Fraction(0))
        resid = max(resid, abs(tot - rhs[i]))
    if not ok or resid:
        raise NotIdentifiedError("F(tau/%d) is not in the span at level %d (residual %s)" % (r0, M, resid))
    ident = FormIdentification(M, r0, residual=resid, coefficients_used=S, unique=rank == len(cols))
    eis_acc = {}
    const = Fraction(0)
    for (name, kind, payload, s, beta), c in zip(cols, x):
        if not c:
            continue
        if kind == "cusp":
            ident.cusp[name] = ident.cusp.get(name, 0) + c
        else:
            if not isinstance(beta, int) or beta != 1:
                raise NotIdentifiedError("identification needs a complex-character series %s" % name)
            eis_acc[payload] = eis_acc.get(payload, 0) + c
            c0 = s.coeff(0)
            const += c * (c0.to_fraction() if isinstance(c0, Cyclotomic) else Fraction(c0))
    ident.eis = [(c, sp) for sp, c in eis_acc.items() if c]
    g0 = Gs.coeff(0)
    g0 = g0.to_fraction() if isinstance(g0, Cyclotomic) else Fraction(g0)
    ident.constant_consistent = g0 == const
    return ident


def e3_from_dict(d):
    return E3Spec(char_by_label(d["phi"]), char_by_label(d["psi"]), int(d.get("t", 1)))


# ------------------------------------------------------- degeneracy map

def level_degeneracy_pullback(data, weight, N_from=4, N_to=8):
    """Pull symbol data back along tau -> (tau+1)/2 from level 4 to level 8.

    data: dict index -> coefficient. Weight 0 indices get multiplicity 2,
    weight 1 multiplicity 4; (a, b) -> {(a', a' + 2b) : a' = a mod 4}."""
    if (N_from, N_to) != (4, 8):
        raise ValueError("only the level 4 -> 8 map tau -> (tau+1)/2 is implemented")
    mult = {0: 2, 1: 4}[weight]
    out = {}
    for (a, b), c in data.items():
        for ap in (a % 4, a % 4 + 4):
            key = (ap, (ap + 2 * b) % 8)
            out[key] = out.get(key, 0) + mult * Fraction(c)
    return {k: v for k, v in out.items() if v}
