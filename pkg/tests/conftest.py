import numpy as np
import pytest

from purifier import Dataset

_ACCEPTANCE = []


def record_acceptance(name: str, passed: bool, detail: str = ""):
    _ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def make_dataset(X, labels=None, ids=None):
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    return Dataset(
        np.arange(n) if ids is None else ids,
        X,
        np.full(n, -1) if labels is None else labels,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
