from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from initial_integrals.dyadic import DyadicStep
from initial_integrals.exact import make_scalar

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=16)
complexes = st.builds(make_scalar, fractions, fractions)
exponents = st.sampled_from([1, 2, 3, Fraction(3, 2), "inf"])


@st.composite
def steps(draw, max_level=5, scalars=fractions):
    level = draw(st.integers(0, max_level))
    coeffs = draw(st.lists(scalars, min_size=1 << level, max_size=1 << level))
    return DyadicStep.from_coeffs(coeffs)


@st.composite
def step_pairs(draw, max_level=5):
    return draw(steps(max_level)), draw(steps(max_level))


# one summary line per acceptance criterion, printed even under output capture
_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = call.excinfo is not None and not call.excinfo.errisinstance(KeyboardInterrupt)
    if call.when == "call" or failed:
        prev = _CRITERIA.get(number, (title, True))[1]
        _CRITERIA[number] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
