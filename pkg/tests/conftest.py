import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from heckecells import build_system, builtin_table, cells, preset  # noqa: E402


@lru_cache(maxsize=None)
def system(name):
    return build_system(preset(name))


@lru_cache(maxsize=None)
def table(name, p=0):
    return builtin_table(system(name), p).ensure_validated()


@lru_cache(maxsize=None)
def decomposition(name, p, side):
    return cells(table(name, p), side)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
