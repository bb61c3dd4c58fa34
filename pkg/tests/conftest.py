import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

CRITERIA = {
    1: "Euler characteristic chi(L) = d + 1",
    2: "alternating Plancherel sum is constant (d+1) dim",
    3: "Plancherel evenness and interpolation",
    4: "Ruelle factorization over exterior powers",
    5: "symmetric-power resummation",
    6: "eta machinery: Mellin split, integrality, angle independence",
    7: "determinant oracle and finite products",
    8: "graded determinant identity and refined torsion",
    9: "functional equations and fault controls",
    10: "Weyl law counting ratio",
    11: "CLI byte-identical reruns",
}

_results: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    """record(n, passed, detail) stores an acceptance outcome for the summary."""

    def record(n: int, passed: bool, detail: str = "") -> None:
        _results.setdefault(n, []).append((bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        outcomes = _results.get(n)
        if not outcomes:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN  {title}")
            continue
        ok = all(p for p, _ in outcomes)
        details = "; ".join(d for _, d in outcomes if d)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  [{details}]")
