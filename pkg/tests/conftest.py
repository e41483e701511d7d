import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

# small integers keep exact comparisons meaningful and produce ties
coords = st.integers(min_value=-5, max_value=5).map(float)


@st.composite
def clouds(draw, m=None, min_size=1, max_size=8):
    m = draw(st.integers(2, 4)) if m is None else m
    size = draw(st.integers(min_size, max_size))
    return draw(arrays(np.float64, (size, m), elements=coords))


@st.composite
def cloud_pairs(draw, max_size=6):
    m = draw(st.integers(2, 3))
    return draw(clouds(m=m, max_size=max_size)), draw(clouds(m=m, max_size=max_size))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
