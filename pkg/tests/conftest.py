import pytest
from hypothesis import settings

# fixed example generation so repeated runs print identical reports
settings.register_profile("reldav", derandomize=True, database=None, print_blob=False)
settings.load_profile("reldav")

VERDICTS: dict[str, str] = {}


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("RELDAV_CACHE", str(tmp_path / "dS.cache"))


@pytest.fixture
def verdict():
    """Record the one-line outcome of an acceptance criterion."""

    def record(key: str, ok: bool, detail: str) -> None:
        VERDICTS[key] = f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[key])
