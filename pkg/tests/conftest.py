import os
import tempfile

import pytest
from hypothesis import HealthCheck, settings

# keep cache files out of the working tree for the whole session
os.environ.setdefault("SPN_CACHE", tempfile.mkdtemp(prefix="spn-cache-"))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def record():
    """Store one summary line per acceptance criterion."""

    def _record(number, ok, detail=""):
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(str(k).rstrip("abc")), str(k))):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
