import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from structura import complex as cx  # noqa: E402

CRITERIA: list[tuple[str, bool, float, float, str]] = []
BUILT_COMPLEXES: list = []


@contextmanager
def criterion(label: str, limit: float | None, text: str):
    """Time a block, record a pass/fail line, and fail if the time limit is exceeded."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        CRITERIA.append((label, ok and within, elapsed, limit, text))
    assert within, f"{label} took {elapsed:.2f} s, limit {limit} s"


@pytest.fixture
def record_complexes(monkeypatch):
    """Record every cochain complex the package constructs while the test runs."""
    for cls in (cx.CochainComplex, cx.FieldCochainComplex):
        orig = cls.__init__

        def init(self, *a, _orig=orig, **kw):
            _orig(self, *a, **kw)
            BUILT_COMPLEXES.append(self)

        monkeypatch.setattr(cls, "__init__", init)
    return BUILT_COMPLEXES


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, elapsed, limit, text in CRITERIA:
        bound = f" (limit {limit:g} s)" if limit is not None else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {text}  [{elapsed:.3f} s{bound}]")
