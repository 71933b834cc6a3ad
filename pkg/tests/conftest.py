from datetime import datetime, timedelta

import numpy as np
import pytest

from robustmax.harness.pairs import write_pairs_csv


@pytest.fixture
def rng():
    return np.random.default_rng(20240301)


@pytest.fixture
def pair_file(tmp_path):
    """Factory writing a synthetic minute-bar price file; returns its path."""

    def make(minutes, seed=0, missing=(), drift_b=0.0, vol=0.001, name="pair.csv"):
        r = np.random.default_rng(seed)
        start = datetime(2024, 3, 1, 9, 30)
        common = np.cumsum(r.standard_normal(minutes) * vol)
        a = 100 * np.exp(common + np.cumsum(r.standard_normal(minutes) * vol / 2))
        b = 50 * np.exp(
            common + np.cumsum(r.standard_normal(minutes) * vol / 2) + drift_b * np.arange(minutes)
        )
        a = a.astype(object)
        for k in missing:
            a[k] = None
        ts = [start + timedelta(minutes=k) for k in range(minutes)]
        path = tmp_path / name
        write_pairs_csv(path, ts, a, b)
        return path

    return make


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
