import time

import pytest

from cnsieve.analytic import compute_constants
from cnsieve.base_primes import build_prime_table

BIG_X = 10**7
SUITE_BUDGET_S = 300

_results: list[tuple[str, bool, str]] = []
_t0 = time.perf_counter()


def record(criterion: str, ok: bool, detail: str) -> None:
    _results.append((criterion, ok, detail))


@pytest.fixture(scope="session")
def small_table():
    return build_prime_table(10**6 + 100)


@pytest.fixture(scope="session")
def big_table():
    # covers Sophie Germain survivors up to 2 * 10^7 plus witness offsets
    return build_prime_table(2 * BIG_X + 100)


@pytest.fixture(scope="session")
def constants(big_table):
    return compute_constants(BIG_X, big_table)


def pytest_terminal_summary(terminalreporter):
    elapsed = time.perf_counter() - _t0
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, ok, detail in sorted(_results, key=lambda r: int(r[0][2:])):
        tr.line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    tr.line(f"{'PASS' if elapsed < SUITE_BUDGET_S else 'FAIL'}  AC10  full suite wall time {elapsed:.1f} s (< {SUITE_BUDGET_S} s)")


def pytest_sessionfinish(session, exitstatus):
    if _results and time.perf_counter() - _t0 > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
