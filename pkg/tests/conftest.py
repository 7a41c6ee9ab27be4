import pytest
from hypothesis import strategies as st

from tensor_periods.hodge import HodgeData

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def hodge_data(draw, max_rank=5, max_weight=8):
    """Valid HodgeData: types below w/2 mirrored to their partners, middle type for odd rank."""
    n = draw(st.integers(1, max_rank))
    half = n // 2
    if n % 2:
        w = 2 * draw(st.integers(half, max(half, max_weight // 2)))
    else:
        w = draw(st.integers(max(1, 2 * half - 1), max(2 * half - 1, max_weight)))
    lows = sorted(draw(st.sets(st.integers(0, max(0, (w - 1) // 2)), min_size=half, max_size=half)))
    mid = [w // 2] if n % 2 else []
    types = tuple(lows + mid + [w - t for t in reversed(lows)])
    sign = draw(st.sampled_from([1, -1])) if n % 2 else None
    return HodgeData(w, types, sign)


@pytest.fixture
def pr1_pair():
    return HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1)


@pytest.fixture
def pr3_pair():
    return HodgeData(1, (0, 1)), HodgeData(2, (0, 2))


@pytest.fixture
def pr2_pair():
    return HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1)
