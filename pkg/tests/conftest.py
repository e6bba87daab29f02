import os

from hypothesis import HealthCheck, settings

settings.register_profile("nilforge", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "nilforge"))


from fractions import Fraction  # noqa: E402

from hypothesis import strategies as st  # noqa: E402

from nilforge.free_lie import LieElement, basis_words  # noqa: E402


def small_fractions():
    return st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def elements(k, s, max_terms=5):
    """Sparse LieElements of F_{k,s} with small rational coefficients."""
    words = st.sampled_from(basis_words(k, s))
    return st.dictionaries(words, small_fractions(), max_size=max_terms).map(
        lambda terms: LieElement(k, s, terms))


# --- acceptance summary -------------------------------------------------------------

import pytest  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n, title = mark.args
    prev = _CRITERIA.get(n)
    failed = rep.failed or (prev is not None and prev[1] == "FAIL")
    seconds = (prev[2] if prev else 0.0) + (rep.duration if rep.when == "call" else 0.0)
    _CRITERIA[n] = (title, "FAIL" if failed else "PASS", seconds)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, seconds = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}  {status}  {seconds:7.2f}s  {title}")
