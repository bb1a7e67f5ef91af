import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "conglab",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "conglab"))

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the end-of-run summary."""

    def record(key: str, ok: bool, detail: str) -> None:
        _CRITERIA[key] = (ok, detail)
        print(f"{key}: {'PASS' if ok else 'FAIL'} - {detail}")

    return record


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("CONGLAB_CACHE", str(tmp_path_factory.getbasetemp() / "hecke-cache"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        ok, detail = _CRITERIA[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'} - {detail}")
