from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from filicenter.polycore import Polynomial

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def generator_recipes() -> dict[int, list[tuple[str, str]]]:
    raw = json.loads((DATA / "generator_recipes.json").read_text())
    return {int(k): [tuple(x) for x in v] for k, v in raw.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def polynomials(nvars: int = 4, max_terms: int = 5, max_exp: int = 3, laurent: bool = False):
    """Strategy for small polynomials over Q in y0..y(nvars-1)."""
    low0 = -max_exp if laurent else 0
    exps = st.tuples(st.integers(low0, max_exp), *[st.integers(0, max_exp) for _ in range(nvars - 1)])
    coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(Polynomial)
