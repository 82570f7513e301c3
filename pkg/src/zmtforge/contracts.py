"""
contracts.py — the two files zmtforge reads and writes.

ProblemFile is a decoded, parsed problem (JSON, polynomials as strings).
CertificateBundle is everything a run emits: artifacts, verdicts and the
provenance needed to re-check them later without recomputation. The
*_from_json helpers rebuild engine objects from a bundle's artifacts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import ParseError, ProblemError
from .hensel.reduce import MhlResult
from .hensel.system import HenselSystem
from .ideal.algebra import Algebra, LocalAt
from .ideal.ideals import Ideal
from .integrality.certs import IntegralityCertificate
from .integrality.tower import Carrier, Tower
from .ring.poly import Poly, unify_vars
from .ring.parse import parse_poly
from .validators import validate_problem_dict

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION", "ProblemFile", "CertificateBundle", "parse_problem", "problem_from_dict",
    "algebra_from_json", "cert_from_json", "system_from_json", "mhl_result_from_json", "parse_rational",
    "parse_field", "parse_fields",
]


def parse_field(text: str, vars: Sequence[str], label: str, strict: bool = True) -> Poly:
    """parse_poly with the problem-file field named in the error."""
    try:
        return parse_poly(text, vars, strict=strict)
    except ParseError as e:
        msg = str(e).rsplit(" at line", 1)[0]
        raise ParseError(f"{label}: {msg}", e.line, e.column, e.text) from None


def parse_fields(texts: Sequence[str], vars: Sequence[str], label: str, strict: bool = True) -> Tuple[Poly, ...]:
    return tuple(parse_field(t, vars, f"{label}[{k}]", strict) for k, t in enumerate(texts))


def parse_rational(value: Any) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ProblemError(f"{value!r} is not a rational number") from None


def _local_from(value: Any, label: str, vars: Sequence[str], point_vars: Sequence[str]) -> LocalAt:
    if value is None or value == "none":
        return LocalAt()
    if value == "point":
        return LocalAt.point(point_vars)
    kind = value.get("kind", "one_plus")
    if kind == "none":
        return LocalAt()
    if kind == "point":
        if "gens" in value:
            return LocalAt("point", parse_fields(value["gens"], vars, f"{label}.gens"))
        return LocalAt.point(point_vars)
    return LocalAt.one_plus(parse_fields(value.get("gens", []), vars, f"{label}.gens"))


# --- problem files ----------------------------------------------------------------

@dataclass(frozen=True)
class ProblemFile:
    task: str
    base_vars: Tuple[str, ...]
    base_relations: Tuple[Poly, ...]
    local_at: LocalAt
    gens: Tuple[str, ...]
    relations: Tuple[Poly, ...]
    ideal: Tuple[Poly, ...]
    options: Dict[str, Any] = field(default_factory=dict, compare=False)
    params: Dict[str, Any] = field(default_factory=dict, compare=False)
    notes: str = field(default="", compare=False)
    raw: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @property
    def vars(self) -> Tuple[str, ...]:
        return unify_vars(self.base_vars, self.gens)

    def base_algebra(self) -> Algebra:
        return Algebra(self.base_vars, Ideal(self.base_relations, self.base_vars), self.local_at, self.base_vars)

    def algebra(self) -> Algebra:
        vs = self.vars
        return Algebra(vs, Ideal(self.base_relations + self.relations, vs), self.local_at, self.base_vars)

    def ideal_in(self, vars: Optional[Sequence[str]] = None) -> Ideal:
        return Ideal(self.ideal, tuple(vars) if vars is not None else self.vars)

    def poly(self, key: str) -> Poly:
        return parse_field(self.params[key], self.vars, f"params.{key}", strict=False)

    def polys(self, key: str) -> Tuple[Poly, ...]:
        return parse_fields(self.params[key], self.vars, f"params.{key}", strict=False)

    def point(self) -> Optional[Tuple[Fraction, ...]]:
        if "point" not in self.params:
            return None
        return tuple(parse_rational(c) for c in self.params["point"])

    def hensel_system(self) -> HenselSystem:
        """f_1 = ... = f_n = 0 in the gens over the base, localized at M when no localization is given."""
        stray = sorted({v for g in self.ideal for v in g.used_vars() if v not in self.base_vars})
        if stray:
            raise ProblemError(f"ideal: M must be generated in the base; found {stray}")
        m = Ideal(tuple(g.restrict(self.base_vars) for g in self.ideal), self.base_vars)
        local = self.local_at if self.local_at.kind != "none" else LocalAt.one_plus(m.gens)
        base = Algebra(self.base_vars, Ideal(self.base_relations, self.base_vars), local, self.base_vars)
        return HenselSystem(base, m, self.gens, self.relations)

    def zmt_problem(self):
        from .zmt import ZmtProblem, find_residual_monic

        owner = self.algebra().unlocalized()
        ideal = self.ideal_in()
        if "residual" in self.params:
            residual = self.polys("residual")
        else:
            seed = ZmtProblem(owner, self.gens, ideal)
            residual = tuple(find_residual_monic(seed, j) for j in range(len(self.gens)))
        return ZmtProblem(owner, self.gens, ideal, residual)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "task": self.task,
            "base": {
                "vars": list(self.base_vars),
                "relations": [str(p) for p in self.base_relations],
                "local_at": self.local_at.to_json(),
            },
            "gens": list(self.gens),
            "relations": [str(p) for p in self.relations],
            "ideal": [str(p) for p in self.ideal],
            "options": dict(self.options),
            "params": dict(self.params),
        }
        if self.notes:
            out["notes"] = self.notes
        return out


def problem_from_dict(d: Mapping[str, Any], task: Optional[str] = None) -> ProblemFile:
    t = validate_problem_dict(d, task)
    base = d.get("base", {})
    base_vars = tuple(base.get("vars", []))
    gens = tuple(d.get("gens", []))
    vs = unify_vars(base_vars, gens)
    base_rel = parse_fields(base.get("relations", []), base_vars, "base.relations")
    local = _local_from(base.get("local_at"), "base.local_at", vs, base_vars)
    relations = parse_fields(d.get("relations", []), vs, "relations")
    ideal = parse_fields(d.get("ideal", []), vs, "ideal")
    return ProblemFile(t, base_vars, base_rel, local, gens, relations, ideal,
                       dict(d.get("options", {})), dict(d.get("params", {})), d.get("notes", ""), dict(d))


def parse_problem(text: str, task: Optional[str] = None) -> ProblemFile:
    """Decode a problem file; JSON syntax errors keep their line and column."""
    try:
        blob = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno, text) from None
    return problem_from_dict(blob, task)


# --- bundles ----------------------------------------------------------------------

@dataclass
class CertificateBundle:
    task: str
    engine_version: str
    problem: Dict[str, Any]
    problem_sha256: str = ""
    options: Dict[str, Any] = field(default_factory=dict)
    artifacts: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    trace: List[Any] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None
    timestamp_utc: str = ""
    git_sha: str = ""
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.verdicts) and all(v.get("ok") for v in self.verdicts.values())

    def to_json(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_json(cls, d: Any) -> "CertificateBundle":
        if not isinstance(d, Mapping):
            raise ProblemError(f"bundle must be a JSON object, got {type(d).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ProblemError(f"bundle has unknown fields {unknown}")
        missing = sorted({"task", "engine_version", "problem"} - set(d))
        if missing:
            raise ProblemError(f"bundle is missing {missing}")
        if d.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ProblemError(f"bundle schema_version {d.get('schema_version')} is not {SCHEMA_VERSION}")
        return cls(**dict(d))


# --- artifact decoders -------------------------------------------------------------

def algebra_from_json(d: Mapping[str, Any]) -> Algebra:
    vs = tuple(d["vars"])
    rel = parse_fields(d.get("relations", []), vs, "algebra.relations", strict=False)
    local = _local_from(d.get("local_at"), "algebra.local_at", vs, d.get("base", []))
    return Algebra(vs, Ideal(rel, vs), local, tuple(d.get("base", [])))


CERT_KEYS = {"element", "numerator", "denominator", "owner", "monic", "var", "coeff_vars", "location",
             "provenance", "ideal", "tower", "expression"}


def cert_from_json(d: Mapping[str, Any], owner: Optional[Algebra] = None) -> IntegralityCertificate:
    """Rebuild a certificate with its tower, if it carried one."""
    unknown = sorted(set(d) - CERT_KEYS)
    if unknown:
        raise ProblemError(f"certificate has unknown fields {unknown}")
    if owner is None:
        owner = algebra_from_json(d["owner"])
    vs = owner.vars
    num = parse_field(d.get("numerator", d["element"]), vs, "certificate.numerator", strict=False)
    den = parse_field(d.get("denominator", "1"), vs, "certificate.denominator", strict=False)
    var = d.get("var", "T")
    cv = tuple(d.get("coeff_vars", []))
    monic = parse_field(d["monic"], unify_vars(cv, (var,)), "certificate.monic", strict=False)
    over = None
    if "ideal" in d:
        over = Ideal(parse_fields(d["ideal"], cv, "certificate.ideal", strict=False), cv)
    tower = expression = None
    if "tower" in d:
        blob = d["tower"]
        carriers = tuple(
            Carrier(c["name"], parse_field(c["image"], vs, "carrier.image", strict=False),
                    parse_field(c["relation"], (c["name"],), "carrier.relation", strict=False),
                    c.get("provenance", "Tower"))
            for c in blob.get("carriers", []))
        tower = Tower(owner, tuple(blob.get("base", [])), carriers)
        expression = parse_field(d["expression"], (), "certificate.expression", strict=False)
    return IntegralityCertificate(owner.element(num, den), monic, var, cv, over, tuple(d.get("provenance", [])),
                                  tower, expression)


def system_from_json(d: Mapping[str, Any]) -> HenselSystem:
    base = algebra_from_json(d["base"])
    m = Ideal(parse_fields(d["point_ideal"], base.vars, "system.point_ideal", strict=False), base.vars)
    vs = unify_vars(base.vars, d["vars"])
    return HenselSystem(base, m, tuple(d["vars"]), parse_fields(d["eqs"], vs, "system.eqs", strict=False))


def mhl_result_from_json(d: Mapping[str, Any], system: HenselSystem) -> MhlResult:
    owner = system.plain_algebra()
    tv = d.get("var", "T")
    ctx = unify_vars(owner.vars, (tv,))

    def p(key: str) -> Poly:
        return parse_field(d[key], ctx, f"mhl.{key}", strict=False)

    return MhlResult(system, owner.element(p("s")), d.get("s_expr", ""),
                     parse_fields(d.get("module_gens", []), owner.vars, "mhl.module_gens", strict=False),
                     int(d.get("r0", 0)), int(d.get("q_exp", 0)), p("d"), p("h"), p("f"),
                     parse_fields(d["nu"], ctx, "mhl.nu", strict=False), p("q"), d.get("route", "module"), tv)
