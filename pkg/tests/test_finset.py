import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elgot_iter.finset import (
    BUDGET_ENV,
    FinSet,
    FunSpace,
    Left,
    Right,
    SizeLimit,
    UnknownState,
    coproduct,
    dstr,
    dstr_inv,
    enumerate_functions,
    instance_budget,
    oracle_iterate,
    preimages,
    product,
)
from elgot_iter.partial import BOTTOM, Value


def test_finset_rejects_duplicates():
    with pytest.raises(ValueError):
        FinSet((1, 1))


def test_index_and_membership():
    s = FinSet(("a", "b"))
    assert s.index("b") == 1
    assert "a" in s and "c" not in s and [] not in s
    with pytest.raises(UnknownState):
        s.index("c")


def test_sums_and_products():
    a, b = FinSet((0, 1)), FinSet(("x",))
    assert coproduct(a, b).elements == (Left(0), Left(1), Right("x"))
    assert product(a, b).elements == ((0, "x"), (1, "x"))


@given(st.integers(0, 3), st.integers(0, 3))
def test_function_space_count_and_order(n, m):
    space = FunSpace(FinSet.range(n), FinSet.range(m))
    tables = list(space)
    assert len(tables) == space.count == m**n
    assert len(set(tables)) == len(tables)
    assert tables == sorted(tables)
    assert list(space) == tables


def test_enumeration_cap():
    with pytest.raises(SizeLimit):
        enumerate_functions(FinSet.range(5), FinSet.range(5), cap=100)
    assert len(list(enumerate_functions(FinSet.range(2), FinSet.range(3), cap=9))) == 9


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "42")
    assert instance_budget() == 42
    monkeypatch.setenv(BUDGET_ENV, "-1")
    with pytest.raises(ValueError):
        instance_budget()


def test_dstr_round_trip():
    for e in (Left(1), Right(2)):
        assert dstr_inv(dstr("w", e)) == ("w", e)


def test_preimages():
    assert preimages((1, 0, 1), 3) == [[1], [0, 2], []]


def test_oracle_examples():
    assert oracle_iterate({0: Right(1), 1: Left(Value("a"))}, 0) == Value("a")
    assert oracle_iterate({0: Right(1), 1: Right(2), 2: Right(0)}, 1) is BOTTOM
    assert oracle_iterate({0: Left(BOTTOM)}, 0) is BOTTOM
    with pytest.raises(UnknownState):
        oracle_iterate({0: Left(1)}, 5)


def test_oracle_exhaustive_small():
    # every path either exits or revisits within |S| hops
    for table in itertools.product(range(-1, 3), repeat=3):
        body = {s: (Left(Value("out")) if c < 0 else Right(c)) for s, c in enumerate(table)}
        for s0 in range(3):
            s, hops = s0, 0
            while table[s] >= 0 and hops <= 3:
                s, hops = table[s], hops + 1
            expected = Value("out") if table[s] < 0 else BOTTOM
            assert oracle_iterate(body, s0) == expected
