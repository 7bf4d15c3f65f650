import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polystrat.polynomials import PolyMap, parse_poly

VARS = ("x", "y")


def mk_map(f1: str, f2: str) -> PolyMap:
    return PolyMap((parse_poly(f1, VARS), parse_poly(f2, VARS)))


@pytest.fixture(scope="session")
def worked_example() -> PolyMap:
    return mk_map("x", "x^2*y*(y+2)")


@pytest.fixture(scope="session")
def shear_map() -> PolyMap:
    return mk_map("x", "x*y")


@pytest.fixture(scope="session")
def automorphisms() -> list:
    return [
        mk_map("x", "y + x^2"),
        mk_map("x + y^3", "y"),
        mk_map("x + y^2", "y - 1"),
    ]
