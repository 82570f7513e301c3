"""
errors.py — one exception tree for the whole engine.

Each class carries the process exit code the CLI maps it to:
2 for bad input or unmet hypotheses, 3 for exhausted caps,
1 for a failed re-verification.
"""

from __future__ import annotations

__all__ = [
    "ZmtforgeError",
    "ParseError", "ConfigError", "ProblemError", "UnknownVariable", "ShapeError",
    "DegenerateResultant", "HypothesisNotSatisfied", "PNotAnnihilating",
    "NotADivisor", "A1NotUnit", "JacobianNotUnit",
    "CapExceeded", "DegreeCapExceeded", "ExponentCapExceeded", "BranchBlowup",
    "WitnessSearchExhausted", "ModuleGensInsufficient", "MembershipSearchExhausted",
    "VerificationError", "InvariantRecheckFailed", "ZeroCheckFailed",
    "SubalgebraWitnessMissing", "MhlReductionFailed",
]


class ZmtforgeError(Exception):
    exit_code = 2
    reason = "Error"

    def __init__(self, msg: str = "", **detail):
        super().__init__(msg or self.__class__.__name__)
        self.detail = detail


# --- input / hypothesis problems (exit 2) --------------------------------------

class ParseError(ZmtforgeError):
    reason = "ParseError"

    def __init__(self, msg: str, line: int = 1, column: int = 1, text: str = ""):
        super().__init__(f"{msg} at line {line}, column {column}", line=line, column=column)
        self.line = line
        self.column = column
        self.text = text


class ConfigError(ZmtforgeError):
    reason = "ConfigError"


class ProblemError(ZmtforgeError):
    reason = "ProblemError"


class UnknownVariable(ZmtforgeError):
    reason = "UnknownVariable"


class ShapeError(ZmtforgeError):
    reason = "ShapeError"


class DegenerateResultant(ZmtforgeError):
    reason = "DegenerateResultant"


class HypothesisNotSatisfied(ZmtforgeError):
    reason = "HypothesisNotSatisfied"


class PNotAnnihilating(ZmtforgeError):
    reason = "PNotAnnihilating"


class NotADivisor(ZmtforgeError):
    reason = "NotADivisor"


class A1NotUnit(ZmtforgeError):
    reason = "A1NotUnit"


class JacobianNotUnit(ZmtforgeError):
    reason = "JacobianNotUnit"


# --- cap exhaustion (exit 3) ---------------------------------------------------

class CapExceeded(ZmtforgeError):
    exit_code = 3
    reason = "CapExceeded"


class DegreeCapExceeded(CapExceeded):
    reason = "DegreeCapExceeded"


class ExponentCapExceeded(CapExceeded):
    reason = "ExponentCapExceeded"


class BranchBlowup(CapExceeded):
    reason = "BranchBlowup"


class WitnessSearchExhausted(CapExceeded):
    reason = "WitnessSearchExhausted"


class ModuleGensInsufficient(CapExceeded):
    reason = "ModuleGensInsufficient"


class MembershipSearchExhausted(CapExceeded):
    reason = "MembershipSearchExhausted"


# --- failed re-checks (exit 1) -------------------------------------------------

class VerificationError(ZmtforgeError):
    exit_code = 1
    reason = "VerificationError"


class InvariantRecheckFailed(VerificationError):
    reason = "InvariantRecheckFailed"


class ZeroCheckFailed(VerificationError):
    reason = "ZeroCheckFailed"


class SubalgebraWitnessMissing(VerificationError):
    reason = "SubalgebraWitnessMissing"


class MhlReductionFailed(VerificationError):
    reason = "MhlReductionFailed"
