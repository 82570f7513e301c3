"""
report.py — bundle rendering: exact JSON, or a short human summary that
lists every certificate with its provenance tags.
"""

from __future__ import annotations

from typing import Any, Iterator, List, Tuple

from .contracts import CertificateBundle
from .errors import ParseError
from .ring.parse import parse_poly
from .run_manifest import dumps_bundle

FORMATS = ("json", "text")


def iter_certificates(blob: Any, path: str = "") -> Iterator[Tuple[str, dict]]:
    """(path, certificate) for every certificate-shaped dict nested in the artifacts."""
    if isinstance(blob, dict):
        if "monic" in blob and "provenance" in blob:
            yield path, blob
        for k, v in blob.items():
            if k in ("owner", "tower"):
                continue
            yield from iter_certificates(v, f"{path}.{k}" if path else str(k))
    elif isinstance(blob, list):
        for i, v in enumerate(blob):
            yield from iter_certificates(v, f"{path}[{i}]")


def _text(b: CertificateBundle) -> str:
    lines: List[str] = [
        f"zmtforge {b.engine_version}  task={b.task}  schema={b.schema_version}",
        f"problem sha256={b.problem_sha256 or '-'}  git={b.git_sha or '-'}  at {b.timestamp_utc or '-'}",
    ]
    if b.error is not None:
        lines.append(f"[FATAL] {b.error.get('reason')}: {b.error.get('message')}")
    for name, v in sorted(b.verdicts.items()):
        tag = "[OK]" if v.get("ok") else "[WARN]"
        detail = v.get("detail") or ""
        reason = "" if v.get("ok") else v.get("reason", "")
        lines.append(" ".join(x for x in (tag, name, reason, detail) if x))

    certs = list(iter_certificates(b.artifacts))
    if certs:
        lines.append(f"certificates ({len(certs)}):")
        for path, c in certs:
            tags = ",".join(c.get("provenance") or []) or "-"
            lines.append(f"  {path}: {c.get('element')}  deg={_degree(c)}  {c.get('location', '')}  [{tags}]")
    if b.timing:
        lines.append("timing: " + "  ".join(f"{k}={v:.3f}" for k, v in sorted(b.timing.items())))
    lines.append("status: " + ("verified" if b.passed else "FAILED"))
    return "\n".join(lines) + "\n"


def _degree(c: dict) -> str:
    try:
        return str(parse_poly(c["monic"]).degree(c.get("var", "T")))
    except ParseError:
        return "?"


def emit_report(b: CertificateBundle, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps_bundle(b)
    if fmt == "text":
        return _text(b)
    raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
