"""End-to-end verification of a registered case: symbol data -> modular form
-> L-value on one side, torus quadrature on the other."""

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .cases import CaseSpec, load_case
from .eis import newform_coeffs
from .exactq import Cyclotomic, parse_poly
from .lfun import BASIS, BASIS_VALUES, EisensteinPoleError, fricke_sign, lambda_cusp, lambda_eis_reg
from .mahler import TorusQuadrature, mahler_measure
from .modsym import (INF, act_cusp, convergence_check, cusp_chain, cusp_matrices, manin_decompose,
                     phi_pullback, residue_sum, residue_trivial_check)
from .rz import NotIdentifiedError, UnbalancedError, expand_and_identify, level_degeneracy_pullback, phi_to_F, sturm_bound
from .siegel import eval_at_cusp, parse_unit
from .symb import unit_to_eis0

DEFAULT_GRID = 64
DEFAULT_LEVELS = 5


class PipelineAbort(RuntimeError):
    """A gate failed; nothing about the integral identity is claimed."""

    def __init__(self, stage, message):
        super().__init__("%s: %s" % (stage, message))
        self.stage = stage
        self.message = message


@dataclass
class VerificationReport:
    case: str
    lhs: float = float("nan")
    lhs_error: float = float("nan")
    rhs_exact: dict = field(default_factory=dict)  # term label -> Fraction
    rhs_other: float = 0.0  # numeric part outside the exact basis
    rhs: float = float("nan")
    expected: str = ""
    expected_value: float = float("nan")
    rhs_matches_expected: bool = False
    diff: float = float("nan")
    rel_diff: float = float("nan")
    tolerance: float = 1e-4
    passed: bool = False
    sign: int = 1
    jensen_integral: float = float("nan")
    gates: dict = field(default_factory=dict)
    identification: str = ""
    fricke: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    mahler_levels: list = field(default_factory=list)
    qexp: list = field(default_factory=list)  # coefficients of F(tau/r), q^0 .. q^S

    def rhs_string(self):
        return format_terms(self.rhs_exact, self.rhs_other)

    def to_json(self):
        d = {k: getattr(self, k) for k in (
            "case", "lhs", "lhs_error", "rhs", "rhs_other", "expected", "expected_value",
            "rhs_matches_expected", "diff", "rel_diff", "tolerance", "passed", "sign",
            "jensen_integral", "gates", "identification", "fricke", "timings", "budget")}
        d["rhs_exact"] = {k: str(v) for k, v in self.rhs_exact.items()}
        d["rhs_string"] = self.rhs_string()
        d["mahler_levels"] = [list(x) for x in self.mahler_levels]
        d["qexp"] = [str(c) for c in self.qexp]
        return d

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, default=str)

    def summary(self):
        lines = [
            "case        %s" % self.case,
            "m(P)        %.12f +- %.2e" % (self.lhs, self.lhs_error),
            "RHS         %s" % self.rhs_string(),
            "            = %.12f (sign %+d)" % (self.rhs, self.sign),
            "expected    %s = %.12f (%s)" % (self.expected, self.expected_value,
                                            "matches" if self.rhs_matches_expected else "MISMATCH"),
            "difference  %.3e (tolerance %.1e)" % (self.diff, self.tolerance),
            "result      %s" % ("PASS" if self.passed else "FAIL"),
        ]
        return "\n".join(lines)


# ---------------------------------------------------------------- helpers

_LAMBDA_CACHE = {}


def cusp_lambda(label):
    """Lambda(f, 3) for a stored newform, with its numerically determined Fricke sign."""
    if label not in _LAMBDA_CACHE:
        f = newform_coeffs(label)
        eps, _ = fricke_sign(f)
        _LAMBDA_CACHE[label] = (lambda_cusp(f, 3, eps=eps), eps)
    return _LAMBDA_CACHE[label]


def _is_form_label(k):
    return k.startswith("f")


def term_value(k):
    if _is_form_label(k):
        return cusp_lambda(k)[0]
    return BASIS_VALUES[k]


def terms_value(terms, other=0.0):
    return sum(float(c) * term_value(k) for k, c in terms.items()) + other


def format_terms(terms, other=0.0):
    parts = []
    for k in sorted(terms, key=lambda k: (not _is_form_label(k), BASIS.index(k) if k in BASIS else 0, k)):
        c = terms[k]
        if not c:
            continue
        lab = "Λ(%s,3)" % k if _is_form_label(k) else {"1": "", "log2": "log(2)", "log3": "log(3)",
                                                         "zeta3/pi2": "ζ(3)/π²"}[k]
        parts.append("%s" % c if not lab else "%s*%s" % (c, lab))
    if other:
        parts.append("%.12g" % other)
    return " + ".join(parts) if parts else "0"


def _add_terms(acc, terms, scale=1):
    for k, v in terms.items():
        acc[k] = acc.get(k, 0) + scale * Fraction(v)
    return {k: v for k, v in acc.items() if v}


def _parse_value(text):
    return complex(sympy.sympify(text, locals={"i": sympy.I}).evalf(30))


def _corollary_params(eis0, milnor):
    """(b, b', d) when the data has the shape c((0,b) - (0,b')) (x) (0,d)."""
    if len(eis0) != 2 or len(milnor) != 1:
        return None
    (u1, c1), (u2, c2) = sorted(eis0.items(), key=lambda kv: -kv[1])
    (v, _), = milnor.items()
    if u1[0] or u2[0] or v[0] or c1 != -c2:
        return None
    return u1[1], u2[1], v[1]


# -------------------------------------------------------------- stages

def symbol_data(spec, unit=None):
    """Weight 0 and weight 1 data at the working level, and the base
    combination [(c, u, v)] of Eis^{0,1}(u, v)."""
    if spec.eis0:
        eis0 = dict(spec.eis0)
    else:
        eis0 = dict(unit_to_eis0(unit or parse_unit(spec.unit)).coeffs)
    milnor = dict(spec.milnor)
    if spec.degeneracy:
        eis0 = level_degeneracy_pullback(eis0, 0, *spec.degeneracy)
        milnor = level_degeneracy_pullback(milnor, 1, *spec.degeneracy)
    base = [(c0 * c1, u, v) for u, c0 in sorted(eis0.items()) for v, c1 in sorted(milnor.items())]
    return eis0, milnor, base, spec.working_level()


def modular_side(spec, order=None, timings=None, gates=None):
    """Run the symbol, gate, RZ and identification stages; returns
    (identification, phi, N)."""
    timings = {} if timings is None else timings
    gates = {} if gates is None else gates
    t = time.time()

    # unit and its boundary values
    try:
        unit = parse_unit(spec.unit)
    except ValueError as e:
        raise PipelineAbort("unit", str(e))
    for cp, want in spec.unit_values.items():
        got = eval_at_cusp(unit, cp)
        if isinstance(got, str) or abs(complex(got) - _parse_value(want)) > 1e-12:
            raise PipelineAbort("unit", "value at %s is %s, expected %s" % (cp, got, want))
    gates["unit_values"] = "checked %d cusps" % len(spec.unit_values)

    eis0, milnor, base, N = symbol_data(spec, unit)
    timings["symbols"] = time.time() - t

    # path
    t = time.time()
    terms = spec.shokurov_terms()
    if terms is None:
        terms = manin_decompose(spec.path_poly(), spec.path["alpha"], spec.path["beta"])
        cusps = cusp_chain(spec.path["alpha"], spec.path["beta"])
    else:
        cusps = sorted({act_cusp(tm.g, c) for tm in terms for c in (INF, (0, 1))})
    timings["decompose"] = time.time() - t

    # residue gate
    t = time.time()
    if spec.residue_gate == "corollary":
        params = _corollary_params(eis0, milnor)
        if params is None:
            raise PipelineAbort("residue", "data does not have the shape c((0,b)-(0,b')) (x) (0,d)")
        b, b2, d = params
        if not residue_trivial_check(b, b2, d, N):
            raise PipelineAbort("residue", "residue_trivial_check(%d, %d, %d, %d) is false" % (b, b2, d, N))
        gates["residue"] = "criterion holds for (b, b', d, N) = (%d, %d, %d, %d)" % (b, b2, d, N)
    elif spec.residue_gate == "cusps":
        res = residue_sum(base, N, cusp_matrices(cusps, N))
        if res is not None:
            raise PipelineAbort("residue", "residue survives at g = %s (%s fibre): %s" % res)
        gates["residue"] = "residues vanish at the cusps %s" % ", ".join(
            "oo" if c == INF else "%d/%d" % c for c in cusps)
    else:
        gates["residue"] = "skipped (case recipe)"
    timings["residue"] = time.time() - t

    # pulled-back symbol and convergence
    t = time.time()
    phi = phi_pullback(base, terms, N).scale(spec.multiplicity)
    conv = convergence_check(phi)
    if not conv.xConverges:
        raise PipelineAbort("convergence", "convergence_check fails: %s" % conv.detail)
    gates["convergence"] = "absolutely convergent over X{0,oo}"
    timings["convergence"] = time.time() - t

    # Rogers-Zudilin products and identification
    t = time.time()
    try:
        F = phi_to_F(phi)
    except UnbalancedError as e:
        raise PipelineAbort("rz", str(e))
    M = spec.identification_level
    try:
        ident = expand_and_identify(F, M, order=order)
    except NotIdentifiedError as e:
        raise PipelineAbort("identify", str(e))
    if not ident.constant_consistent:
        raise PipelineAbort("identify", "constant term disagrees with the identified combination")
    ident.series = rescaled_coeffs(F, ident.rescale, ident.coefficients_used)
    gates["identification"] = "F(tau/%d) = %s at level %d, %d coefficients%s" % (
        ident.rescale, ident, M, ident.coefficients_used,
        "" if ident.coefficients_used >= sturm_bound(M, margin=0) else " (below the Sturm bound)")
    timings["identify"] = time.time() - t
    return ident, phi, N


def rescaled_coeffs(F, r, S):
    """Coefficients of F(tau / r) at q^0 .. q^S."""
    s = F.qexp(r * S + 1)
    out = []
    for n in range(S + 1):
        c = s.coeff(r * n)
        out.append(c.to_fraction() if isinstance(c, Cyclotomic) else Fraction(c))
    return out


def lvalue_side(ident, N):
    """(3/N^3)(Lambda(cusp part, 3) + Lambda*(Eisenstein part, 0)) as (exact terms, other)."""
    pre = Fraction(3, N ** 3)
    exact = {}
    fricke = {}
    for lab, c in ident.cusp.items():
        if "(" in lab:
            raise PipelineAbort("lvalue", "an oldform %s appears; not supported" % lab)
        exact = _add_terms(exact, {lab: c * pre})
        fricke[lab] = cusp_lambda(lab)[1]
    other = 0.0
    if ident.eis:
        try:
            ev = lambda_eis_reg([(c * pre, sp) for c, sp in ident.eis])
        except EisensteinPoleError as e:
            raise PipelineAbort("lvalue", str(e))
        exact = _add_terms(exact, ev.exact)
        other = ev.other
    return exact, other, fricke


def resolve_sign(L_exact, L_other, constants, ambiguous=True):
    """The sign s making s * L + constants (the Jensen integral of log|t| over
    the Deninger cycle, where |t| > 1) positive."""
    L = terms_value(L_exact, L_other)
    c = terms_value(constants)
    if not ambiguous:
        if L + c <= 0:
            raise PipelineAbort("sign", "Jensen integral %.6g is not positive" % (L + c))
        return 1
    ok = [s for s in (1, -1) if s * L + c > 0]
    if len(ok) != 1:
        raise PipelineAbort("sign", "positivity does not fix the sign (L = %.6g, constants %.6g)" % (L, c))
    return ok[0]


def _poly_var(spec):
    return "XYZ".index(spec.variable)


def verify_case(case, tol=1e-4, grid=DEFAULT_GRID, levels=DEFAULT_LEVELS, order=None):
    """Full verification; raises PipelineAbort when a gate fails."""
    spec = case if isinstance(case, CaseSpec) else load_case(case)
    rep = VerificationReport(spec.name, tolerance=tol, expected=spec.expected,
                             budget={"grid": grid, "levels": levels, "order": order})
    t0 = time.time()
    if spec.kind == "closed_form":
        rep.rhs_exact = dict(spec.expected_terms)
        rep.gates["modular"] = "closed-form case, no modular pipeline"
    else:
        ident, _, N = modular_side(spec, order, rep.timings, rep.gates)
        rep.identification = "F(tau/%d) = %s" % (ident.rescale, ident)
        rep.qexp = ident.series
        t = time.time()
        L_exact, L_other, rep.fricke = lvalue_side(ident, N)
        rep.timings["lvalue"] = time.time() - t
        rep.sign = resolve_sign(L_exact, L_other, spec.constants, spec.milnor_sign_ambiguous)
        rep.jensen_integral = rep.sign * terms_value(L_exact, L_other) + terms_value(spec.constants)
        rhs = _add_terms({}, spec.m_Pstar)
        rhs = _add_terms(rhs, spec.constants)
        rep.rhs_exact = _add_terms(rhs, L_exact, rep.sign)
        rep.rhs_other = rep.sign * L_other
    rep.rhs = terms_value(rep.rhs_exact, rep.rhs_other)
    rep.expected_value = terms_value(spec.expected_terms)
    if rep.rhs_other:
        rep.rhs_matches_expected = abs(rep.rhs - rep.expected_value) < 1e-9
    else:
        rep.rhs_matches_expected = rep.rhs_exact == {k: v for k, v in spec.expected_terms.items() if v}

    t = time.time()
    est = mahler_measure(parse_poly(spec.polynomial), TorusQuadrature(grid, levels), _poly_var(spec))
    rep.timings["mahler"] = time.time() - t
    rep.lhs, rep.lhs_error = est.value, est.error
    rep.mahler_levels = est.levels[-levels:]  # earlier entries belong to m(P*)
    rep.diff = abs(rep.lhs - rep.rhs)
    rep.rel_diff = rep.diff / abs(rep.rhs) if rep.rhs else float("inf")
    rep.passed = rep.diff < tol and rep.rhs_matches_expected and math.isfinite(rep.lhs)
    rep.timings["total"] = time.time() - t0
    return rep
