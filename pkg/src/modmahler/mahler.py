"""Numerical Mahler measures by iterated Jensen's formula on the torus."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .exactq import LaurentPoly3

NEAR_UNIT = 1e-10
CHUNK = 1 << 18


@dataclass
class TorusQuadrature:
    """Grid n x n at the coarsest level, doubled `levels - 1` times."""
    grid: int = 128
    levels: int = 5
    offset: float = 0.5  # nodes at (j + offset) / n; 1/2 keeps them off symmetric curves
    exponents: tuple = (1.5, 2.0, 2.5, 3.0)


@dataclass
class MahlerEstimate:
    value: float
    error: float
    nodes: int = 0
    seconds: float = 0.0
    levels: list = field(default_factory=list)  # [(n, trapezoid value)]
    near_unit: int = 0
    method: str = "jensen"

    def __str__(self):
        return "%.12f +- %.2e (%s, %d nodes, %.2fs)" % (self.value, self.error, self.method,
                                                         self.nodes, self.seconds)


# ------------------------------------------------------------- polynomials

def _as_dict(P):
    if isinstance(P, LaurentPoly3):
        return {k: float(v) for k, v in P.terms.items()}
    return {tuple(k): complex(v) if isinstance(v, complex) else float(v) for k, v in P.items()}


def _active(terms):
    n = len(next(iter(terms)))
    return [i for i in range(n) if len({k[i] for k in terms}) > 1]


def _split(terms, var):
    """Coefficients in `var`, shifted to start at power 0; other exponents kept."""
    lo = min(k[var] for k in terms)
    out = {}
    for k, v in terms.items():
        kk = list(k)
        p = kk[var] - lo
        kk[var] = 0
        out.setdefault(p, {})[tuple(kk)] = v
    return out


def _roots_logplus(coeffs):
    """Sum of log+ |z| over the roots of sum c_k z^k, nodewise.

    coeffs: list of complex arrays (c_0 .. c_d) of equal shape; c_d nonzero."""
    d = len(coeffs) - 1
    lead = coeffs[-1]
    if d == 0:
        return np.zeros(lead.shape), 0
    if d == 1:
        z = [-coeffs[0] / lead]
    elif d == 2:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = np.sqrt(b * b - 4 * a * c)
        s = np.where((b.conj() * disc).real >= 0, 1.0, -1.0)
        q = -(b + s * disc) / 2
        with np.errstate(divide="ignore", invalid="ignore"):
            z1 = q / a
            z2 = np.where(q != 0, c / q, 0)
        z = [z1, z2]
    else:
        flat = [c.ravel() for c in coeffs]
        m = flat[0].size
        out = np.empty((m, d), dtype=complex)
        for s0 in range(0, m, CHUNK):
            s1 = min(m, s0 + CHUNK)
            comp = np.zeros((s1 - s0, d, d), dtype=complex)
            comp[:, 1:, :-1] = np.eye(d - 1)
            for k in range(d):
                comp[:, k, -1] = -flat[k][s0:s1] / flat[d][s0:s1]
            out[s0:s1] = np.linalg.eigvals(comp)
        z = [out[:, j].reshape(lead.shape) for j in range(d)]
    tot = np.zeros(lead.shape)
    near = 0
    for zz in z:
        r = np.abs(zz)
        near += int(np.count_nonzero(np.abs(r - 1) < NEAR_UNIT))
        tot += np.log(np.maximum(r, 1.0))
    return tot, near


def _eval_coeff(poly, grids, shape):
    """Evaluate {exponents: c} on a product grid; grids[i] is a 1d array of angles or None."""
    out = np.zeros(shape, dtype=complex)
    for k, v in poly.items():
        term = np.full(shape, v, dtype=complex)
        for i, e in enumerate(k):
            if e and grids[i] is not None:
                term = term * grids[i] ** e
        out += term
    return out


def _richardson(vals, ns, exponents):
    """Repeated Richardson elimination; returns (estimate, error, table)."""
    table = [list(vals)]
    for p in exponents[:len(vals) - 1]:
        prev = table[-1]
        new = []
        for i in range(1, len(prev)):
            r = (ns[i] / ns[i - 1]) ** p
            new.append((r * prev[i] - prev[i - 1]) / (r - 1))
        table.append(new)
        if len(new) == 1:
            break
    best = table[-1][-1]
    if len(table) >= 2 and len(table[-2]) >= 2:
        err = abs(best - table[-2][-1])
    elif len(vals) >= 2:
        err = abs(vals[-1] - vals[-2])
    else:
        err = float("nan")
    return best, err, table


def _measure(terms, quad, var=None, stats=None):
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        raise ValueError("the zero polynomial has no Mahler measure")
    act = _active(terms)
    nvar = len(next(iter(terms)))
    if not act:
        return math.log(abs(sum(terms.values()))), 0.0
    if var is None or var not in act:
        var = act[-1]
    split = _split(terms, var)
    deg = max(split)
    lead = split[deg]
    rest = [i for i in act if i != var]
    real = all(not isinstance(v, complex) or v.imag == 0 for v in terms.values())
    m_star, e_star = _measure(lead, quad, None, stats)
    if not rest:
        c = np.array([complex(sum(split.get(p, {}).values())) for p in range(deg + 1)])
        roots = np.roots(c[::-1])
        return m_star + float(np.sum(np.log(np.maximum(np.abs(roots), 1.0)))), e_star
    ns, vals = [], []
    for lev in range(quad.levels):
        n = quad.grid * 2 ** lev
        ang = np.exp(2j * np.pi * (np.arange(n) + quad.offset) / n)
        if len(rest) == 1:
            grids = [None] * nvar
            grids[rest[0]] = ang
            shape = (n,)
            coeffs = [_eval_coeff(split.get(p, {}), grids, shape) for p in range(deg + 1)]
            lp, near = _roots_logplus(coeffs)
            val = float(lp.mean())
            nodes = n
        else:
            # rows in chunks; the second variable runs along columns. With real
            # coefficients row j and row n-1-j carry the same values (complex
            # conjugation of both angles), so only half the rows are needed.
            total = 0.0
            near = 0
            half = real and n % 2 == 0 and quad.offset == 0.5
            n_rows = n // 2 if half else n
            rows = max(1, CHUNK // n)
            for r0 in range(0, n_rows, rows):
                grids = [None] * nvar
                grids[rest[0]] = ang[r0:min(r0 + rows, n_rows), None]
                grids[rest[1]] = ang[None, :]
                shape = (min(rows, n_rows - r0), n)
                coeffs = [_eval_coeff(split.get(p, {}), grids, shape) for p in range(deg + 1)]
                lp, nr = _roots_logplus(coeffs)
                total += float(lp.sum())
                near += nr
            val = total / (n * n_rows)
            nodes = n * n_rows
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + nodes
            stats["near"] = stats.get("near", 0) + near
            stats.setdefault("levels", []).append((n, val))
        ns.append(n)
        vals.append(val)
    best, err, _ = _richardson(vals, ns, quad.exponents)
    return m_star + best, err + e_star


def mahler_measure(P, quad=None, var=None):
    """m(P) = m(P*) + integral of sum log+ |roots in var| over the torus."""
    quad = quad or TorusQuadrature()
    t0 = time.time()
    stats = {}
    value, err = _measure(_as_dict(P), quad, var, stats)
    return MahlerEstimate(value, err, stats.get("nodes", 0), time.time() - t0,
                          stats.get("levels", []), stats.get("near", 0))


def mahler_montecarlo(P, samples=200000, seed=0, batch=100000):
    """Mean of log|P| at uniform random torus points, with standard error."""
    t0 = time.time()
    terms = _as_dict(P)
    rng = np.random.default_rng(seed)
    nvar = len(next(iter(terms)))
    s = s2 = 0.0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        pts = np.exp(2j * np.pi * rng.random((nvar, k)))
        v = np.zeros(k, dtype=complex)
        for e, c in terms.items():
            t = np.full(k, c, dtype=complex)
            for i, ei in enumerate(e):
                if ei:
                    t = t * pts[i] ** ei
            v += t
        lv = np.log(np.abs(v))
        s += float(lv.sum())
        s2 += float((lv * lv).sum())
        done += k
    mean = s / samples
    var = max(s2 / samples - mean * mean, 0.0)
    return MahlerEstimate(mean, math.sqrt(var / samples), samples, time.time() - t0, method="montecarlo")


# --------------------------------------------------------------- diagnostics

def p2_fiber_Z(phi, psi):
    """The root Z > 1 of X + 1/X + Y + 1/Y + Z + 1/Z - 2 at X = e^{i phi}, Y = e^{i psi}."""
    a = 1 - np.cos(phi) - np.cos(psi)
    return a + np.sqrt(np.maximum(a * a - 1, 0.0))


def deninger_fiber_diagnostics(n=200, seed=0):
    """Checks on the Deninger cycle of X + 1/X + Y + 1/Y + Z + 1/Z - 2."""
    rng = np.random.default_rng(seed)
    phi = rng.uniform(-np.pi, np.pi, n * n)
    psi = rng.uniform(-np.pi, np.pi, n * n)
    keep = np.cos(phi) + np.cos(psi) < 0
    phi, psi = phi[keep], psi[keep]
    Z = p2_fiber_Z(phi, psi)
    X, Y = np.exp(1j * phi), np.exp(1j * psi)
    res = np.abs(X + 1 / X + Y + 1 / Y + Z + 1 / Z - 2)
    fib = np.abs(np.cos(phi) + np.cos(psi) - (1 - (Z + 1 / Z) / 2))
    zmax = 3 + 2 * math.sqrt(2)
    corner = float(p2_fiber_Z(np.pi, np.pi))
    edge = float(p2_fiber_Z(np.pi / 2, np.pi / 2 + 1e-9))
    return {
        "points": int(keep.sum()),
        "max_residual": float(res.max()),
        "Z_min": float(Z.min()),
        "Z_max": float(Z.max()),
        "Z_in_range": bool(np.all(Z > 1) and np.all(Z <= zmax + 1e-12)),
        "max_fibre_error": float(fib.max()),
        "corner_Z": corner,
        "corner_error": abs(corner - zmax),
        "edge_Z": edge,
    }
