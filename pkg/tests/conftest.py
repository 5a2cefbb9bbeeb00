from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from permclosure.perm_core import PermGroup, Permutation, group_generate  # noqa: E402


def perm(n: int, text: str) -> Permutation:
    return Permutation.parse(n, text)


def gen(n: int, *cycles: str) -> PermGroup:
    return group_generate(n, [perm(n, c) for c in cycles])


@pytest.fixture
def s4():
    return gen(4, "(0 1 2 3)", "(0 1)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
