from __future__ import annotations

from functools import lru_cache

import pytest

from liepair.catalog import alternative_choices, catalog
from liepair.compare import build_structure
from liepair.hpl import build_main_contraction

CATALOG = catalog()
VALID = [name for name in CATALOG]


@lru_cache(maxsize=None)
def structure(name: str, N: int = 3, arity: int = 4, choice: int = 0):
    pair = CATALOG[name]
    ch = alternative_choices(pair)[choice] if choice else None
    return build_structure(pair, ch, N, arity)


@lru_cache(maxsize=None)
def main_contraction(name: str, N: int = 3, choice: int = 0):
    pair = CATALOG[name]
    ch = alternative_choices(pair)[choice] if choice else None
    return build_main_contraction(pair, ch, N)


@pytest.fixture(params=VALID)
def pair(request):
    return CATALOG[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
