import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def tau_table(M):
    """Ramanujan tau(1..M) from q * prod (1 - q^n)^24, by repeated polynomial multiplication."""
    c = [0] * (M + 1)
    c[0] = 1
    for n in range(1, M + 1):
        for _ in range(24):
            for i in range(M, n - 1, -1):
                c[i] -= c[i - n]
    return {m: c[m - 1] for m in range(1, M + 1)}


def sigma(k, m):
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


@pytest.fixture(scope="session")
def tau():
    return tau_table(160)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
