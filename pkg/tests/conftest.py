import pytest


def trial_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def naive_survivors(n, primes):
    return [k for k in range(1, n + 1) if all(k % p != 0 and (p == 2 or k % p != p - 2) for p in primes)]


def naive_twins(n):
    return sum(1 for q in range(2, n + 1) if trial_prime(q) and trial_prime(q + 2))


@pytest.fixture
def small_primes():
    return [p for p in range(2, 200) if trial_prime(p)]


# acceptance criteria report: one PASS/FAIL line per criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion number and short title")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when not in ("setup", "call"):
        return
    num, title = mark.args
    ok = call.excinfo is None
    prev = _criteria.get(num, (title, True))
    _criteria[num] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num} {'PASS' if ok else 'FAIL'}: {title}")
