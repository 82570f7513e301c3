#!/usr/bin/env python3
"""Run from a checkout: python3 scripts/zmtforge.py <task> <problem.json> [options]."""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.zmtforge.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
