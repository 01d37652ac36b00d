import importlib
from pathlib import Path

import pytest
from hypothesis import strategies as st

from elgot_iter import delay as D
from elgot_iter.finset import Left, Right

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def _backends():
    out = [importlib.import_module("elgot_iter._kernels_py")]
    try:
        out.append(importlib.import_module("elgot_iter._kernels"))
    except ImportError:
        pass
    return out


@pytest.fixture(scope="module", params=_backends(), ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param


@pytest.fixture
def programs():
    return PROGRAMS


@st.composite
def codes(draw, max_states=5, max_payloads=3):
    """Kernel-encoded loop bodies."""
    n = draw(st.integers(1, max_states))
    m = draw(st.integers(0, max_payloads))
    return draw(st.lists(st.integers(-m, n - 1), min_size=n, max_size=n))


@st.composite
def machines(draw, max_states=5, values=st.integers(0, 3)):
    """Finite table machines, possibly divergent, possibly postponed."""
    k = draw(st.integers(1, max_states))
    table = {}
    for s in range(k):
        if draw(st.booleans()):
            table[s] = Left(draw(values))
        else:
            table[s] = Right(draw(st.integers(0, k - 1)))
    d = D.finite_machine(table, draw(st.integers(0, k - 1)))
    for _ in range(draw(st.integers(0, 2))):
        d = D.later(d)
    return d


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
