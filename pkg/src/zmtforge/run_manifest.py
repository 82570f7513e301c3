from __future__ import annotations

import hashlib
import json
import os
import subprocess
import tempfile
import time
from pathlib import Path

from .contracts import CertificateBundle
from .errors import ParseError


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def read_text(path: str | Path) -> str:
    """UTF-8 text of a problem or bundle file; undecodable bytes are a ParseError."""
    raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        head = raw[:e.start]
        line = head.count(b"\n") + 1
        col = e.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(f"{path}: not valid UTF-8 ({e.reason})", line, col) from None


def _git_sha() -> str:
    try:
        return subprocess.check_output(["git", "rev-parse", "HEAD"], text=True,
                                       stderr=subprocess.DEVNULL).strip()
    except Exception:
        return ""


def stamp(bundle: CertificateBundle) -> CertificateBundle:
    """Fill in the time and source revision of a run."""
    bundle.timestamp_utc = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    bundle.git_sha = _git_sha()
    return bundle


def dumps_bundle(bundle: CertificateBundle) -> str:
    return json.dumps(bundle.to_json(), indent=2, sort_keys=True) + "\n"


def write_bundle(dst: str | Path, bundle: CertificateBundle) -> Path:
    """Write once: a temp file in the target directory, then os.replace."""
    outp = Path(dst)
    outp.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=outp.name + ".", suffix=".tmp", dir=str(outp.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(dumps_bundle(bundle))
        os.replace(tmp, outp)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return outp


def load_bundle(path: str | Path) -> CertificateBundle:
    p = Path(path)
    text = read_text(p)
    try:
        blob = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{p}: invalid JSON: {e.msg}", e.lineno, e.colno, text) from None
    return CertificateBundle.from_json(blob)
