"""Case registry: JSON case files describing one Mahler measure identity each."""

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .modsym import ShokurovTerm, parse_weight_poly


def _index_dict(d):
    out = {}
    for key, c in d.items():
        a, b = (int(x) for x in re.findall(r"-?\d+", key))
        out[(a, b)] = out.get((a, b), 0) + Fraction(c)
    return out


@dataclass
class CaseSpec:
    name: str
    polynomial: str
    variable: str = "Z"
    kind: str = "modular"  # or "closed_form"
    description: str = ""
    level: int = 0
    unit: str = ""
    unit_values: dict = field(default_factory=dict)  # cusp text -> expected value text
    eis0: dict = field(default_factory=dict)  # optional explicit weight 0 data (index -> coefficient)
    eis0_level: int = 0
    milnor: dict = field(default_factory=dict)  # index -> coefficient, weight 1
    milnor_sign_ambiguous: bool = True
    degeneracy: tuple = None  # (from level, to level)
    path: dict = field(default_factory=dict)
    multiplicity: Fraction = Fraction(1)
    identification_level: int = 0
    residue_gate: str = "corollary"
    m_Pstar: dict = field(default_factory=dict)  # basis label -> Fraction
    constants: dict = field(default_factory=dict)
    expected: str = ""
    expected_terms: dict = field(default_factory=dict)
    source: str = ""

    @classmethod
    def from_json(cls, d, source=""):
        spec = cls(d["name"], d["polynomial"], d.get("variable", "Z"), d.get("kind", "modular"),
                   d.get("description", ""), expected=d.get("expected", ""),
                   expected_terms={k: Fraction(v) for k, v in d.get("expected_terms", {}).items()},
                   source=source)
        if spec.kind == "closed_form":
            return spec
        spec.level = int(d["level"])
        spec.unit = d.get("unit", "")
        spec.unit_values = dict(d.get("unit_values", {}))
        if "eis0" in d:
            spec.eis0 = _index_dict(d["eis0"]["coeffs"])
            spec.eis0_level = int(d["eis0"]["N"])
        spec.milnor = _index_dict(d["milnor"]["coeffs"])
        spec.milnor_sign_ambiguous = bool(d["milnor"].get("sign_ambiguous", True))
        if d.get("degeneracy"):
            spec.degeneracy = (int(d["degeneracy"]["from"]), int(d["degeneracy"]["to"]))
        spec.path = dict(d["path"])
        spec.multiplicity = Fraction(d.get("multiplicity", "1"))
        spec.identification_level = int(d.get("identification_level", spec.level))
        spec.residue_gate = d.get("residue_gate", "corollary")
        if spec.residue_gate not in ("corollary", "cusps", "none"):
            raise ValueError("unknown residue gate %r" % spec.residue_gate)
        spec.m_Pstar = {k: Fraction(v) for k, v in d.get("m_Pstar", {}).items()}
        spec.constants = {k: Fraction(v) for k, v in d.get("constants", {}).items()}
        return spec

    def working_level(self):
        return self.degeneracy[1] if self.degeneracy else self.level

    def shokurov_terms(self):
        """Explicit path terms, or None when the path is P{alpha, beta}."""
        if "terms" in self.path:
            return [ShokurovTerm.from_json(t) for t in self.path["terms"]]
        return None

    def path_poly(self):
        return parse_weight_poly(self.path["poly"])

    def info(self):
        out = {"name": self.name, "polynomial": self.polynomial, "kind": self.kind,
               "expected": self.expected, "description": self.description}
        if self.kind == "modular":
            out.update({"level": self.level, "unit": self.unit, "path": self.path,
                        "multiplicity": str(self.multiplicity),
                        "identification_level": self.identification_level,
                        "residue_gate": self.residue_gate})
        return out


def _case_dir():
    return resources.files("modmahler").joinpath("data/cases")


def list_cases():
    names = [p.name[:-5] for p in _case_dir().iterdir() if p.name.endswith(".json")]
    order = ["P2", "Q", "R", "P6", "P26", "E4", "smyth3"]
    return sorted(names, key=lambda n: (order.index(n) if n in order else len(order), n))


def load_case(name_or_path):
    """Load a registered case by name, or any case file by path."""
    if os.path.exists(name_or_path) and name_or_path.endswith(".json"):
        with open(name_or_path) as fh:
            return CaseSpec.from_json(json.load(fh), name_or_path)
    path = _case_dir().joinpath(name_or_path + ".json")
    if not path.is_file():
        raise KeyError("unknown case %r (registered: %s)" % (name_or_path, ", ".join(list_cases())))
    return CaseSpec.from_json(json.loads(path.read_text()), str(path))


def case_info(name):
    return load_case(name).info()


def bad_case_path(name):
    """Path of a deliberately failing case file shipped for gate tests."""
    return str(resources.files("modmahler").joinpath("data/bad/%s.json" % name))
