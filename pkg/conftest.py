from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.zmtforge.config import EngineCaps, use_caps  # noqa: E402
from src.zmtforge.hensel import HenselSystem  # noqa: E402
from src.zmtforge.ideal import Algebra, Ideal, LocalAt  # noqa: E402
from src.zmtforge.ring import Poly, parse_poly  # noqa: E402

# the worked example: x, y over Q[a, b] localized at <a, b>
F1 = "-a + x + b*x*y + 2*b*x^2"
F2 = "-b + y + a*x^2 + a*x*y + b*y^2"
FIXTURES = ROOT / "tests" / "fixtures"

settings.register_profile("zmtforge", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("zmtforge")


@pytest.fixture
def P():
    """Parse in the worked example's variables."""
    return lambda text: parse_poly(text, ("a", "b", "x", "y"))


@pytest.fixture
def worked_ring() -> Algebra:
    vs = ("a", "b", "x", "y")
    return Algebra(vs, Ideal((parse_poly(F1, vs), parse_poly(F2, vs)), vs), base=("a", "b"))


@pytest.fixture
def worked_local(worked_ring) -> Algebra:
    ab = (Poly.var("a"), Poly.var("b"))
    xy = (Poly.var("x"), Poly.var("y"))
    return Algebra(worked_ring.vars, worked_ring.relations, LocalAt.one_plus(ab + xy), worked_ring.base)


@pytest.fixture
def worked_system() -> HenselSystem:
    ab = ("a", "b")
    base = Algebra(ab, Ideal((), ab), LocalAt.one_plus((Poly.var("a"), Poly.var("b"))), ab)
    m = Ideal((Poly.var("a"), Poly.var("b")), ab)
    eqs = (parse_poly(F1, ab + ("x", "y")), parse_poly(F2, ab + ("x", "y")))
    return HenselSystem(base, m, ("x", "y"), eqs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def caps():
    c = EngineCaps()
    with use_caps(c):
        yield c


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
