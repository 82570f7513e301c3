"""
config.py — engine caps: JSON defaults, .env / environment overlay, CLI overrides.

Pure functions read the active caps through current_caps(); the CLI and tests
install a different set with `with use_caps(caps): ...`.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from dotenv import load_dotenv

from .errors import ConfigError

DEFAULT_CAPS_PATH = Path(__file__).resolve().parents[2] / "config" / "engine_caps.json"

ENV_KEYS = {
    "degree_cap": "ZMTFORGE_DEGREE_CAP",
    "exp_cap": "ZMTFORGE_EXP_CAP",
    "branch_cap": "ZMTFORGE_BRANCH_CAP",
    "trace": "ZMTFORGE_TRACE",
}


@dataclass(frozen=True)
class EngineCaps:
    degree_cap: int = 512
    exp_cap: int = 64
    branch_cap: int = 256
    solve_degree_cap: int = 12
    module_route_cap: int = 6
    n_search_cap: int = 16
    trace: bool = False
    order: str = "degrevlex"

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


_ACTIVE: contextvars.ContextVar[EngineCaps] = contextvars.ContextVar("zmtforge_caps", default=EngineCaps())


def current_caps() -> EngineCaps:
    return _ACTIVE.get()


@contextlib.contextmanager
def use_caps(caps: EngineCaps) -> Iterator[EngineCaps]:
    token = _ACTIVE.set(caps)
    try:
        yield caps
    finally:
        _ACTIVE.reset(token)


def _coerce(name: str, raw: Any) -> Any:
    if name == "trace":
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    if name == "order":
        s = str(raw).strip().lower()
        if s not in ("degrevlex", "lex"):
            raise ConfigError(f"order must be 'degrevlex' or 'lex', got {raw!r}")
        return s
    try:
        val = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if val <= 0:
        raise ConfigError(f"{name} must be positive, got {val}")
    return val


def load_caps(path: Optional[str | Path] = None, **overrides: Any) -> EngineCaps:
    """
    Defaults from config/engine_caps.json, then ZMTFORGE_* env vars (a .env file
    is honoured), then explicit overrides. None-valued overrides are ignored.
    """
    known = {f.name for f in fields(EngineCaps)}
    caps = EngineCaps()

    p = Path(path) if path else DEFAULT_CAPS_PATH
    if p.exists():
        try:
            blob = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}: invalid JSON ({e.msg} at line {e.lineno})") from None
        unknown = sorted(set(blob) - known - {"notes"})
        if unknown:
            raise ConfigError(f"{p}: unknown cap keys {unknown}")
        caps = replace(caps, **{k: _coerce(k, v) for k, v in blob.items() if k in known})
    elif path:
        raise ConfigError(f"caps file not found: {p}")

    load_dotenv(override=False)
    env = {k: os.environ.get(v) for k, v in ENV_KEYS.items()}
    caps = replace(caps, **{k: _coerce(k, v) for k, v in env.items() if v not in (None, "")})

    bad = sorted(set(overrides) - known)
    if bad:
        raise ConfigError(f"unknown cap overrides {bad}")
    caps = replace(caps, **{k: _coerce(k, v) for k, v in overrides.items() if v is not None})
    return caps
