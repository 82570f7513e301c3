#!/usr/bin/env python3
"""
cli.py — `zmtforge <task> <problem.json>`: parse, run, verify, write one bundle.

Exit codes: 0 every verdict passed, 1 a verification failed,
2 bad input or unmet hypotheses, 3 a cap was exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .config import load_caps
from .contracts import CertificateBundle, parse_problem
from .errors import ZmtforgeError
from .gates import die, fail_from, ok, require_verdicts
from .report import FORMATS, emit_report
from .run_manifest import load_bundle, read_text, sha256_text, stamp, write_bundle
from .tasks import execute, reverify
from .validators import TASK_ALIASES, TASKS, canonical_task

log = logging.getLogger("zmtforge")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zmtforge", description="Certified commutative algebra over Q.")
    ap.add_argument("task", choices=list(TASKS) + sorted(TASK_ALIASES) + ["verify"])
    ap.add_argument("problem", help="problem JSON (a bundle JSON for 'verify')")
    ap.add_argument("--out", default=None, help="bundle path (default out/<task>_bundle.json)")
    ap.add_argument("--order", choices=["degrevlex", "lex"], default=None)
    ap.add_argument("--exp-cap", type=int, default=None)
    ap.add_argument("--degree-cap", type=int, default=None)
    ap.add_argument("--branch-cap", type=int, default=None)
    ap.add_argument("--caps", default=None, help="engine caps JSON (default config/engine_caps.json)")
    ap.add_argument("--trace", action="store_true", help="DEBUG logging and trace records in the bundle")
    ap.add_argument("--format", choices=FORMATS, default="text")
    ap.add_argument("--version", action="version", version=f"zmtforge {__version__}")
    return ap


def _overrides(args: argparse.Namespace) -> dict:
    return {
        "order": args.order,
        "exp_cap": args.exp_cap,
        "degree_cap": args.degree_cap,
        "branch_cap": args.branch_cap,
        "trace": True if args.trace else None,
    }


def _verify(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.problem)
    caps = load_caps(args.caps, **{**bundle.options, **{k: v for k, v in _overrides(args).items() if v is not None}})
    verdicts = reverify(bundle, caps)
    bundle.verdicts = {k: v.to_json() for k, v in verdicts.items()}
    if args.format == "json":
        print(emit_report(bundle, "json"), end="")
    passed = require_verdicts(verdicts)
    if args.out:
        write_bundle(args.out, bundle)
    return 0 if passed else 1


def _failure_bundle(task: str, text: str, exc: ZmtforgeError) -> CertificateBundle:
    return stamp(CertificateBundle(
        task=task, engine_version=__version__, problem={}, problem_sha256=sha256_text(text),
        error={"reason": exc.reason, "message": str(exc), "exit_code": exc.exit_code},
    ))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.trace else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.task == "verify":
        try:
            return _verify(args)
        except ZmtforgeError as exc:
            fail_from(exc)
        except OSError as exc:
            die(f"cannot read bundle {args.problem}: {exc}")

    task = canonical_task(args.task)
    out = Path(args.out or f"out/{task}_bundle.json")
    try:
        text = read_text(args.problem)
    except OSError as exc:
        die(f"cannot read problem file {args.problem}: {exc}")
    except ZmtforgeError as exc:
        fail_from(exc)

    try:
        problem = parse_problem(text, task)
        caps = load_caps(args.caps, **{**problem.options,
                                       **{k: v for k, v in _overrides(args).items() if v is not None}})
        bundle = stamp(execute(problem, caps, sha256_text(text)))
    except ZmtforgeError as exc:
        write_bundle(out, _failure_bundle(task, text, exc))
        fail_from(exc)

    write_bundle(out, bundle)
    print(emit_report(bundle, args.format), end="")
    if not bundle.passed:
        failed = [k for k, v in bundle.verdicts.items() if not v.get("ok")]
        print(f"[FATAL] verification failed: {failed}", file=sys.stderr)
        return 1
    ok(f"{task} bundle written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
