import pytest

# criterion number -> (title, passed, note); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}" + (f"  ({note})" if note else ""))


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion, including failures."""

    class Recorder:
        def __init__(self):
            self.note = ""

        def __call__(self, n, title):
            self.n, self.title = n, title
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            ACCEPTANCE[self.n] = (self.title, exc_type is None, self.note)
            return False

    return Recorder()
