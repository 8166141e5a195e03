import pytest

_RESULTS = {}


class Recorder:
    def __init__(self, key):
        self.key = key
        self.failures = []
        self.notes = []

    def check(self, label, value, want, tol):
        ok = abs(value - want) <= tol
        self.notes.append(f"{label}={value:.6f}")
        if not ok:
            self.failures.append(f"{label}: {value:.6f} vs {want} (tol {tol:g})")
        return ok

    def require(self, label, ok):
        if not ok:
            self.failures.append(label)
        return ok


@pytest.fixture
def criterion(request):
    key = request.node.get_closest_marker("criterion").args[0]
    rec = Recorder(key)
    yield rec
    _RESULTS[key] = rec


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion id")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: int(k[2:])):
        rec = _RESULTS[key]
        status = "FAIL" if rec.failures else "PASS"
        detail = "; ".join(rec.failures) if rec.failures else ", ".join(rec.notes)
        terminalreporter.write_line(f"{key} {status} {detail}".rstrip())
