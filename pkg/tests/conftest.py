from __future__ import annotations

from pathlib import Path

import pytest

from qpz import load_corpus

REPO_ROOT = Path(__file__).resolve().parent.parent
SEED_PATH = REPO_ROOT / "data" / "seed.json"

_acceptance_results: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): exit-criterion test; one PASS/FAIL line per name"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        _acceptance_results[marker.args[0]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results.items():
        terminalreporter.write_line(f"{name}: {outcome}")


@pytest.fixture(scope="session")
def seed_path() -> Path:
    return SEED_PATH


@pytest.fixture(scope="session")
def seed():
    """(document, graph) pair for the seed corpus."""
    return load_corpus(SEED_PATH)


@pytest.fixture(scope="session")
def seed_doc(seed):
    return seed[0]


@pytest.fixture(scope="session")
def seed_graph(seed):
    return seed[1]
