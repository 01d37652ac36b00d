import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elgot_iter import delay as D
from elgot_iter.algebra import (
    IterAlgebra,
    LoopBody,
    NotSearchAlgebra,
    check_bottom_preservation,
    check_delay_laws_bounded,
    check_elgot_laws,
    check_loop_splitting,
    check_search_algebra,
    exponential_algebra,
    iter_to_search_algebra,
    iterate,
    maybe_algebra,
    maybe_search_algebra,
    product_algebra,
    search_algebra_to_iter,
)
from elgot_iter.finset import FinSet, Left, Right, UnknownState, oracle_iterate
from elgot_iter.partial import BOTTOM, Value, collapse_finite

K2 = maybe_algebra(FinSet(("a", "b")))


def body(*entries):
    return LoopBody(FinSet(tuple(range(len(entries)))), dict(enumerate(entries)))


def test_loop_body_validation():
    with pytest.raises(UnknownState):
        body(Right(3))
    with pytest.raises(ValueError):
        LoopBody(FinSet((0, 1)), {0: Left(1)})
    with pytest.raises(TypeError):
        body("nope")


def test_iterate_examples():
    assert iterate(K2, body(Left(Value("a")), Left(Value("a"))), 1) == Value("a")
    cyc = body(Right(1), Right(2), Right(0))
    assert [iterate(K2, cyc, s) for s in range(3)] == [BOTTOM] * 3
    assert iterate(K2, body(Right(1), Left(Value("a"))), 0) == Value("a")
    with pytest.raises(UnknownState):
        iterate(K2, cyc, 3)


def test_bottom_constant():
    assert K2.bottom is BOTTOM


@given(st.lists(st.integers(-3, 2), min_size=3, max_size=3))
def test_iterate_matches_oracle(code):
    carrier = K2.carrier.elements
    b = body(*[Left(carrier[-c - 1]) if c < 0 else Right(c) for c in code])
    for s in range(3):
        assert iterate(K2, b, s) == oracle_iterate(b, s)


def test_product_algebra():
    p = product_algebra(K2, K2)
    assert p.iterate(body(Left((Value("a"), Value("b")))), 0) == (Value("a"), Value("b"))
    # the left exit component is divergent, the right one returns
    assert p.iterate(body(Right(1), Left((BOTTOM, Value("b")))), 0) == (BOTTOM, Value("b"))
    assert p.bottom == (BOTTOM, BOTTOM)


def test_product_projections_exhaustive():
    a, b = maybe_algebra(1), maybe_algebra(1)
    p = product_algebra(a, b)
    pairs = p.carrier.elements
    for n in (1, 2, 3):
        for code in itertools.product(range(-len(pairs), n), repeat=n):
            h = body(*[Left(pairs[-c - 1]) if c < 0 else Right(c) for c in code])
            for s in range(n):
                left, right = p.iterate(h, s)
                assert left == a.iterate(h.map_exits(lambda q: q[0]), s)
                assert right == b.iterate(h.map_exits(lambda q: q[1]), s)


def test_exponential_algebra():
    one = exponential_algebra(K2, FinSet(("x",)))
    assert one.iterate(body(Right(1), Left((Value("a"),))), 0) == (Value("a"),)
    two = exponential_algebra(K2, FinSet(("x", "y")))
    const = body(Right(1), Left((Value("b"), Value("b"))))
    assert two.iterate(const, 0) == (Value("b"), Value("b"))
    # point x exits at once, point y is sent into a cycle by its Bottom payload
    mixed = body(Right(1), Left((Value("a"), BOTTOM)))
    assert two.iterate(mixed, 0) == (Value("a"), BOTTOM)
    assert len(two.carrier) == 9


def test_search_algebra_round_trip():
    recovered = search_algebra_to_iter(maybe_search_algebra, K2.carrier)
    cyc = body(Right(1), Right(0))
    assert recovered.iterate(cyc, 0) is BOTTOM
    a = iter_to_search_algebra(K2)
    assert a(D.iota(Value("a"), 3)) == Value("a")
    assert a(D.never()) is BOTTOM


def test_not_a_search_algebra():
    def counts_steps(d):
        obs = D.run_for(d, 100)
        return obs.value if obs.steps == 0 else BOTTOM

    with pytest.raises(NotSearchAlgebra):
        search_algebra_to_iter(counts_steps, K2.carrier)
    with pytest.raises(NotSearchAlgebra):
        search_algebra_to_iter(lambda d: BOTTOM, K2.carrier)


def test_elgot_laws_hold_for_the_maybe_algebra():
    report = check_elgot_laws(K2, max_states=2)
    assert report.passed
    assert set(report.counts) == {"Fixpoint", "Uniformity", "Folding", "Compositionality"}


def test_broken_iteration_is_reported():
    always_bottom = IterAlgebra.from_function(K2.carrier, lambda loop, s: BOTTOM)
    report = check_elgot_laws(always_bottom, max_states=2, laws=["fixpoint"])
    assert not report.passed
    assert all(f.law == "Fixpoint" for f in report.failures)
    assert report.failures[0].lhs == "Bottom"


def test_uniformity_for_constant_h():
    # h merges every state of S into the single state of S'
    for g_exit in K2.carrier:
        g = body(Left(g_exit))
        for f_code in itertools.product([Left(g_exit), Right(0), Right(1)], repeat=2):
            f = body(*f_code)
            if not any(isinstance(e, Left) for e in f_code):
                continue
            # (id+h) f = g h requires every Left in f to carry g's exit
            assert all(iterate(K2, f, s) in (g_exit, BOTTOM) for s in range(2))
            if all(isinstance(e, Left) for e in f_code):
                assert all(iterate(K2, f, s) == iterate(K2, g, 0) for s in range(2))


def test_custom_algebra_runs_through_the_generic_path():
    slow = IterAlgebra.from_function(K2.carrier, lambda loop, s: oracle_iterate(loop, s))
    assert check_elgot_laws(slow, max_states=2).passed


def test_other_suites():
    for report in (check_loop_splitting(), check_bottom_preservation(), check_search_algebra(2, 3, 1),
                   check_delay_laws_bounded()):
        assert report.passed, report.summary()
    assert not check_delay_laws_bounded().exact


def test_search_algebra_collapse_on_machine():
    d = D.finite_machine({0: Right(1), 1: Left(Value("a"))}, 0)
    assert maybe_search_algebra(d) == Value("a") == collapse_finite(d).value
