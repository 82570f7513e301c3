"""
validators.py — shape checks for problem files, run before any algebra.

Everything here raises ProblemError with a message naming the offending
field; polynomial syntax is left to the parser.
"""

from __future__ import annotations

from dataclasses import fields
from typing import Any, Dict, List, Mapping

from .config import EngineCaps
from .errors import ProblemError
from .ring.parse import is_name

TASKS = ("gb", "member", "radical", "integral-cert", "zmt", "zmt-global", "newton", "mhl")
TASK_ALIASES = {"hensel": "mhl"}
TOP_KEYS = {"task", "base", "gens", "relations", "ideal", "options", "params", "notes"}
BASE_KEYS = {"vars", "relations", "local_at"}
LOCAL_KINDS = ("none", "point", "one_plus")
CERT_METHODS = ("elimination", "lying-over", "emmanuel", "kronecker")

# params each task understands; anything else is a typo worth failing on
TASK_PARAMS: Dict[str, set] = {
    "gb": set(),
    "member": {"poly"},
    "radical": {"poly"},
    "integral-cert": {"element", "method", "coeffs", "f", "h", "var", "coeff_vars"},
    "zmt": {"residual", "s"},
    "zmt-global": {"witness"},
    "newton": {"steps", "point"},
    "mhl": {"point"},
}


def canonical_task(task: str) -> str:
    t = TASK_ALIASES.get(str(task).strip().lower(), str(task).strip().lower())
    if t not in TASKS:
        raise ProblemError(f"unknown task {task!r}; expected one of {list(TASKS) + sorted(TASK_ALIASES)}")
    return t


def _require_str_list(value: Any, label: str) -> List[str]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise ProblemError(f"{label}: expected a list of strings, got {value!r}")
    return value


def _require_names(value: Any, label: str) -> List[str]:
    names = _require_str_list(value, label)
    bad = [v for v in names if not is_name(v)]
    if bad:
        raise ProblemError(f"{label}: {bad} are not valid variable names")
    dups = sorted({v for v in names if names.count(v) > 1})
    if dups:
        raise ProblemError(f"{label}: duplicate variables {dups}")
    return names


def _validate_local_at(value: Any) -> None:
    if value is None or value in LOCAL_KINDS:
        return
    if not isinstance(value, Mapping):
        raise ProblemError(f"base.local_at: expected one of {list(LOCAL_KINDS)} or an object, got {value!r}")
    unknown = sorted(set(value) - {"kind", "gens"})
    if unknown:
        raise ProblemError(f"base.local_at: unknown keys {unknown}")
    kind = value.get("kind", "one_plus")
    if kind not in LOCAL_KINDS:
        raise ProblemError(f"base.local_at.kind: {kind!r} not in {list(LOCAL_KINDS)}")
    if kind == "one_plus":
        _require_str_list(value.get("gens", []), "base.local_at.gens")


def _validate_base(value: Any) -> List[str]:
    if not isinstance(value, Mapping):
        raise ProblemError(f"base: expected an object, got {type(value).__name__}")
    unknown = sorted(set(value) - BASE_KEYS)
    if unknown:
        raise ProblemError(f"base: unknown keys {unknown}")
    names = _require_names(value.get("vars", []), "base.vars")
    _require_str_list(value.get("relations", []), "base.relations")
    _validate_local_at(value.get("local_at"))
    return names


def _require_rationals(value: Any, label: str) -> None:
    if not isinstance(value, list):
        raise ProblemError(f"{label}: expected a list, got {value!r}")
    for c in value:
        if isinstance(c, bool) or not isinstance(c, (int, str)):
            raise ProblemError(f"{label}: {c!r} is not an integer or a rational string like '1/2'")


def _validate_params(task: str, params: Any, n_gens: int) -> None:
    if not isinstance(params, Mapping):
        raise ProblemError(f"params: expected an object, got {type(params).__name__}")
    unknown = sorted(set(params) - TASK_PARAMS[task])
    if unknown:
        raise ProblemError(f"params: {unknown} not understood by task {task!r}")

    if task in ("member", "radical") and not isinstance(params.get("poly"), str):
        raise ProblemError(f"params.poly: task {task!r} needs the polynomial to test")

    if task == "integral-cert":
        method = params.get("method", "elimination")
        if method not in CERT_METHODS:
            raise ProblemError(f"params.method: {method!r} not in {list(CERT_METHODS)}")
        if method == "kronecker":
            for k in ("f", "h"):
                if not isinstance(params.get(k), str):
                    raise ProblemError(f"params.{k}: the kronecker method needs f and h")
        elif not isinstance(params.get("element"), str):
            raise ProblemError(f"params.element: method {method!r} needs the element to certify")
        if method == "emmanuel":
            _require_str_list(params.get("coeffs"), "params.coeffs")
        if "coeff_vars" in params:
            _require_names(params["coeff_vars"], "params.coeff_vars")

    if task == "zmt" and "residual" in params:
        res = _require_str_list(params["residual"], "params.residual")
        if len(res) != n_gens:
            raise ProblemError(f"params.residual: {len(res)} monics for {n_gens} generators")

    if task == "zmt-global":
        _require_str_list(params.get("witness"), "params.witness")

    if task == "newton":
        steps = params.get("steps", 1)
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
            raise ProblemError(f"params.steps: expected a non-negative integer, got {steps!r}")

    if task in ("newton", "mhl") and "point" in params:
        _require_rationals(params["point"], "params.point")
        if len(params["point"]) != n_gens:
            raise ProblemError(f"params.point: {len(params['point'])} coordinates for {n_gens} unknowns")


def validate_problem_dict(d: Any, task: str | None = None) -> str:
    """
    Check a decoded problem file; returns the canonical task name.
    `task` (from the command line) must agree with the file's own task when both are given.
    """
    if not isinstance(d, Mapping):
        raise ProblemError(f"problem file must hold a JSON object, got {type(d).__name__}")
    unknown = sorted(set(d) - TOP_KEYS)
    if unknown:
        raise ProblemError(f"unknown top-level keys {unknown}; allowed {sorted(TOP_KEYS)}")

    declared = d.get("task")
    if declared is None and task is None:
        raise ProblemError("no task given on the command line or in the problem file")
    t = canonical_task(task if task is not None else declared)
    if declared is not None and task is not None and canonical_task(declared) != t:
        raise ProblemError(f"command-line task {task!r} disagrees with the file's task {declared!r}")

    base_vars = _validate_base(d.get("base", {}))
    gens = _require_names(d.get("gens", []), "gens")
    clash = sorted(set(gens) & set(base_vars))
    if clash:
        raise ProblemError(f"gens {clash} are also base variables")
    _require_str_list(d.get("relations", []), "relations")
    _require_str_list(d.get("ideal", []), "ideal")

    options = d.get("options", {})
    if not isinstance(options, Mapping):
        raise ProblemError(f"options: expected an object, got {type(options).__name__}")
    known = {f.name for f in fields(EngineCaps)}
    bad = sorted(set(options) - known)
    if bad:
        raise ProblemError(f"options: unknown keys {bad}; allowed {sorted(known)}")

    if t in ("newton", "mhl"):
        if not gens:
            raise ProblemError(f"task {t!r} needs the unknowns in gens")
        if len(d.get("relations", [])) != len(gens):
            raise ProblemError(f"task {t!r}: {len(d.get('relations', []))} equations for {len(gens)} unknowns")
        if not d.get("ideal"):
            raise ProblemError(f"task {t!r} needs the maximal ideal M in ideal")
    if t == "zmt" and not d.get("ideal"):
        raise ProblemError("task 'zmt' needs the ideal i in ideal")

    _validate_params(t, d.get("params", {}), len(gens))

    notes = d.get("notes", "")
    if not isinstance(notes, str):
        raise ProblemError("notes: expected a string")
    return t
