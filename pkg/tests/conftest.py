from __future__ import annotations

import sys
from pathlib import Path

import pytest

from boundary_kernel.vernacular import FileReport, Session, corpus_dir, new_env

CORPUS = corpus_dir()


def run_corpus_file(stem: str, profile: str = "cic") -> tuple[FileReport, object]:
    """Check one shipped corpus file under ``profile``; return the report and env."""
    env = new_env(profile, prelude=stem != "prelude")
    report = Session(env, search=[CORPUS]).check_file(CORPUS / f"{stem}.pdx")
    return report, env


def run_text(text: str, profile: str = "cic", prelude: bool = True):
    env = new_env(profile, prelude=prelude)
    return Session(env).check_text(text), env


@pytest.fixture
def corpus() -> Path:
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n][1])
    passed = sum(ok for ok, _ in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
