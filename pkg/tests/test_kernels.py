from hypothesis import given
from hypothesis import strategies as st

from elgot_iter import kernels as selected
from elgot_iter._kernels_py import DIVERGE

from conftest import codes


def walk(code, start):
    seen = set()
    s = start
    while s not in seen:
        seen.add(s)
        if code[s] < 0:
            return -code[s] - 1
        s = code[s]
    return DIVERGE


def test_selected_backend_is_named():
    assert selected.BACKEND in ("cython", "python")


def test_examples(kernels):
    assert kernels.iterate_from([1, 2, 0], 0) == kernels.DIVERGE
    assert kernels.iterate_from([1, kernels.exit_code(4)], 0) == 4
    assert kernels.iterate_all([1, kernels.exit_code(0), 2]) == [0, 0, kernels.DIVERGE]
    assert kernels.bounded_from([1, kernels.exit_code(0)], 0, 1) == kernels.DIVERGE
    assert kernels.bounded_from([1, kernels.exit_code(0)], 0, 2) == 0
    assert kernels.bounded_chain([1, kernels.exit_code(0)], 0, 3) == [DIVERGE, DIVERGE, 0, 0]


@given(codes())
def test_iterate_matches_walk(kernels, code):
    for s in range(len(code)):
        assert kernels.iterate_from(code, s) == walk(code, s)
    assert kernels.iterate_all(code) == [walk(code, s) for s in range(len(code))]


@given(codes(), st.integers(0, 8))
def test_bounded_chain_matches_bounded_from(kernels, code, n_max):
    for s in range(len(code)):
        chain = kernels.bounded_chain(code, s, n_max)
        assert chain == [kernels.bounded_from(code, s, n) for n in range(n_max + 1)]


def test_bad_start_rejected(kernels):
    import pytest

    with pytest.raises((IndexError, ValueError)):
        kernels.iterate_from([0], 3)
