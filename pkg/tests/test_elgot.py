import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elgot_iter import delay as D
from elgot_iter.elgot import (
    TOP,
    ElgotBody,
    EventuallyConstant,
    bounded_elgot,
    check_bounded_elgot,
    check_elgot_monad_axioms,
    check_rearrangement,
    check_sigma_laws,
    default_dagger,
    dovetail_index,
    elgot_iterate,
    elgot_iterate_fn,
    sigma_join,
    sigma_meet,
    sigma_omega_join,
)
from elgot_iter.finset import FinSet, Left, Right, UnknownState
from elgot_iter.kernels import iterate_all
from elgot_iter.partial import BOTTOM, Determined, Unknown, Value, pleq


def body(*entries):
    return ElgotBody(FinSet(tuple(range(len(entries)))), dict(enumerate(entries)))


def test_elgot_iterate_examples():
    assert elgot_iterate(body(Value(Left("y"))), 0) == Value("y")
    assert elgot_iterate(body(Value(Right(0))), 0) is BOTTOM
    assert elgot_iterate(body(Value(Right(1)), BOTTOM), 0) is BOTTOM
    assert elgot_iterate(body(Value(Right(1)), Value(Left("y"))), 0) == Value("y")
    with pytest.raises(UnknownState):
        elgot_iterate(body(Value(Left("y"))), 5)
    with pytest.raises(UnknownState):
        body(Value(Right(4)))


def test_elgot_iterate_fn_on_an_infinite_state_type():
    collatz = lambda n: Value(Left(n)) if n == 1 else Value(Right(n // 2 if n % 2 == 0 else 3 * n + 1))
    seen = []
    assert elgot_iterate_fn(collatz, 27, on_visit=seen.append) == Value(1)
    assert len(seen) == 112
    assert elgot_iterate_fn(lambda n: Value(Right((n + 1) % 5)), 0) is BOTTOM
    with pytest.raises(RuntimeError):
        elgot_iterate_fn(lambda n: Value(Right(n + 1)), 0, max_states=100)


def test_bounded_elgot():
    two_hop = body(Value(Right(1)), Value(Right(2)), Value(Left("y")))
    assert bounded_elgot(two_hop, 0, 0) is BOTTOM
    assert [bounded_elgot(two_hop, 0, n) for n in range(5)] == [BOTTOM] * 3 + [Value("y")] * 2
    assert bounded_elgot(two_hop, 0, 4) == elgot_iterate(two_hop, 0)
    with pytest.raises(ValueError):
        bounded_elgot(two_hop, 0, -1)


@given(st.lists(st.integers(-3, 2), min_size=3, max_size=3))
def test_bounded_chain_is_monotone_and_stabilizes(code):
    entries = [BOTTOM if c == -1 else Value(Left(-2 - c)) if c < -1 else Value(Right(c)) for c in code]
    f = body(*entries)
    for x in range(3):
        chain = [bounded_elgot(f, x, n) for n in range(6)]
        assert all(pleq(a, b) for a, b in zip(chain, chain[1:]))
        assert chain[4] == chain[5] == elgot_iterate(f, x)


def test_default_dagger_indexes_the_partial_carrier():
    # codes: 0 -> Left y0, 1 -> Right 1
    assert default_dagger([-2, 1], 1) == [1, 0]


def test_axiom_suites_pass():
    report = check_elgot_monad_axioms(2, 3)
    assert report.passed, report.summary()
    assert {"Fixpoint", "Naturality", "Codiagonal", "Uniformity", "Strength"} <= set(report.counts)
    for r in (check_rearrangement(2, 2), check_bounded_elgot(3, 2)):
        assert r.passed, r.summary()


def test_codiagonal_on_a_body_ignoring_the_inner_summand():
    # [T[id, inr]] leaves a body of shape Y+X unchanged, so it is the Fixpoint case
    f = body(Value(Right(1)), Value(Left("y")))
    assert elgot_iterate(f, 0) == elgot_iterate(body(Value(Left("y")), Value(Left("y"))), 0)


def test_non_least_dagger_is_caught():
    def arbitrary(code, ny):
        # sends every divergent start to the first output instead of Bottom
        out = [0 if r < 0 else r for r in iterate_all(code)]
        return [1 if r == 0 and ny else r for r in out]

    report = check_elgot_monad_axioms(2, 2, dagger=arbitrary)
    assert not report.passed
    assert {f.law for f in report.failures} & {"Uniformity", "Leastness", "Fixpoint"}


def test_sigma_truth_tables():
    assert sigma_meet(TOP, TOP) == TOP
    assert sigma_meet(TOP, BOTTOM) is BOTTOM
    assert sigma_join(BOTTOM, TOP) == TOP
    assert sigma_join(BOTTOM, BOTTOM) is BOTTOM
    for a, b in itertools.product((TOP, BOTTOM), repeat=2):
        assert sigma_join(a, sigma_meet(a, b)) == a


def test_sigma_delay_backend():
    met = D.run_for(sigma_meet(D.iota((), 2), D.iota((), 3)), 5)
    assert isinstance(met, D.Converged) and met.steps == 5
    joined = D.run_for(sigma_join(D.never(), D.now(())), 1)
    assert isinstance(joined, D.Converged) and joined.steps == 0
    assert isinstance(D.run_for(sigma_join(D.iota((), 4), D.iota((), 9)), 100), D.Converged)
    assert D.run_for(sigma_join(D.iota((), 4), D.iota((), 9)), 100).steps == 4


def test_omega_join_dovetail():
    assert dovetail_index(0, 0) == 0
    assert [dovetail_index(i, n - i) for n in range(3) for i in range(n + 1)] == list(range(6))
    seq = lambda i: D.iota((), 2) if i == 7 else D.never()
    obs = D.run_for(sigma_omega_join(seq), 1000)
    assert isinstance(obs, D.Converged)
    assert obs.steps == dovetail_index(7, 2) == 52
    assert obs.steps <= (7 + 2 + 1) ** 2
    never = sigma_omega_join(lambda i: D.never())
    assert isinstance(D.run_for(never, 2000), D.StillRunning)


def test_omega_join_maybe_backend():
    assert sigma_omega_join(EventuallyConstant((BOTTOM, TOP), BOTTOM)) == TOP
    assert sigma_omega_join(EventuallyConstant((), BOTTOM)) is BOTTOM
    assert sigma_omega_join(lambda i: TOP if i == 3 else BOTTOM, bound=4) == TOP
    assert sigma_omega_join(lambda i: TOP if i == 3 else BOTTOM, bound=3) is BOTTOM
    assert sigma_omega_join(lambda i: TOP if i == 3 else BOTTOM, backend="maybe") == Determined(TOP)
    assert isinstance(sigma_omega_join(lambda i: BOTTOM, backend="maybe", fuel=20), Unknown)


def test_sigma_suite():
    report = check_sigma_laws()
    assert report.passed, report.summary()
    assert not report.exact
