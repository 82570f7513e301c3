"""
gates.py — the one place where failures become process exits and console
status lines, so library code never prints or calls sys.exit.
"""

from __future__ import annotations

import sys
from typing import Iterable, Mapping, NoReturn

from .errors import ZmtforgeError
from .integrality.certs import Verdict

__all__ = ["die", "warn", "ok", "fail_from", "require_verdicts"]


def die(msg: str, code: int = 2) -> NoReturn:
    print(f"[FATAL] {msg}", file=sys.stderr)
    sys.exit(code)


def warn(msg: str) -> None:
    print(f"[WARN] {msg}", file=sys.stderr)


def ok(msg: str) -> None:
    print(f"[OK] {msg}")


def fail_from(exc: ZmtforgeError) -> NoReturn:
    """Exit with the code carried by the exception class."""
    die(f"{exc.reason}: {exc}", exc.exit_code)


def require_verdicts(verdicts: Mapping[str, Verdict] | Iterable[tuple]) -> bool:
    """Print one line per verdict; True when every one passed."""
    items = verdicts.items() if isinstance(verdicts, Mapping) else verdicts
    passed = True
    for name, v in items:
        if v.ok:
            ok(f"{name}: verified")
        else:
            passed = False
            warn(f"{name}: {v.reason} {v.detail}".rstrip())
    return passed
