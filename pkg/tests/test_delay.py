import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elgot_iter import delay as D
from elgot_iter.delay import Converged, StillRunning, ThreeValued
from elgot_iter.finset import Left, Right

from conftest import machines

DEPTH = 50


def same(d1, d2, depth=DEPTH):
    return D.agree_to_depth(d1, d2, depth)


def steps(d, fuel=200):
    obs = D.run_for(d, fuel)
    return obs.steps if isinstance(obs, Converged) else None


def test_now():
    assert D.run_for(D.now(5), 0) == Converged(5, 0)
    assert D.out(D.now("a")) == Left("a")


def test_later():
    assert D.run_for(D.later(D.now(7)), 1) == Converged(7, 1)
    assert isinstance(D.run_for(D.later(D.later(D.now(7))), 1), StillRunning)
    r = D.out(D.later(D.now(3)))
    assert isinstance(r, Right) and D.run_for(r.value, 0) == Converged(3, 0)


def test_coit_counts_down():
    f = lambda k: Left("done") if k == 0 else Right(k - 1)
    assert D.run_for(D.coit(f, 3)) == Converged("done", 3)
    assert D.run_for(D.coit(Left, 9), 0) == Converged(9, 0)
    assert isinstance(D.run_for(D.coit(Right, 0), 10**4), StillRunning)


def test_bind_adds_steps():
    d = D.bind(D.later(D.later(D.now(2))), lambda x: D.later(D.now(x + 1)))
    assert D.run_for(d) == Converged(3, 3)


def test_strength():
    assert D.run_for(D.strength(1, D.later(D.now(2)))) == Converged((1, 2), 1)
    assert D.run_for(D.costrength(D.iota("a", 2), "b")) == Converged(("a", "b"), 2)


def test_iota():
    assert D.run_for(D.iota("x", 0), 0) == Converged("x", 0)
    assert D.run_for(D.iota("x", 2), 2) == Converged("x", 2)
    assert D.run_for(D.iota("x", 3), 3) == Converged("x", 3)
    residual = D.run_for(D.iota("x", 3), 2)
    assert isinstance(residual, StillRunning)
    assert D.run_for(residual.residual) == Converged("x", 1)
    with pytest.raises(ValueError):
        D.iota("x", -1)


def test_race_examples():
    r = D.run_for(D.race(D.now("a"), D.later(D.now("b"))))
    assert r.steps == 0 and r.value.value[0] == "a"
    assert D.run_for(r.value.value[1]) == Converged("b", 1)

    r = D.run_for(D.race(D.later(D.now("a")), D.now("b")))
    assert r.steps == 0 and isinstance(r.value, Right) and r.value.value[1] == "b"
    assert D.run_for(r.value.value[0]) == Converged("a", 1)

    # simultaneous: the left machine wins
    r = D.run_for(D.race(D.now("a"), D.now("b")))
    assert isinstance(r.value, Left) and r.value.value[0] == "a"


def test_race_with_divergent_arm():
    r = D.run_for(D.race(D.never(), D.iota("b", 4)))
    assert r.steps == 4 and r.value.value[1] == "b"


def test_bisim_weak_examples():
    assert D.bisim_weak_fuel(D.now(1), D.later(D.now(1)), 1) is ThreeValued.TRUE
    assert D.bisim_weak_fuel(D.now(1), D.now(2), 0) is ThreeValued.FALSE
    for k in (0, 5, 50):
        assert D.bisim_weak_fuel(D.now(1), D.never(), k) is ThreeValued.UNKNOWN


def test_bisim_strong_distinguishes_steps():
    assert D.bisim_strong_fuel(D.now(1), D.later(D.now(1)), 5) is ThreeValued.FALSE
    assert D.bisim_strong_fuel(D.iota(1, 3), D.later(D.iota(1, 2)), 5) is ThreeValued.TRUE
    assert D.bisim_strong_fuel(D.never(), D.never(), 5) is ThreeValued.UNKNOWN


def test_three_valued_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(ThreeValued.TRUE)


def test_run_for_rejects_negative_fuel():
    with pytest.raises(ValueError):
        D.run_for(D.now(1), -1)


def test_iterate_zero_time_cycle_diverges():
    # a loop-back that takes no time can never produce a step
    d = D.iterate(lambda z: D.now(Right(1 - z)), 0)
    assert isinstance(D.run_for(d, 100), StillRunning)


def test_iterate_unfolds_step_exactly():
    body = lambda k: D.later(D.now(Left("end") if k == 0 else Right(k - 1)))
    assert D.run_for(D.iterate(body, 3)) == Converged("end", 4)


def test_pair_retraction_restores_steps():
    pair = D.dmap(D.iota(1, 2), lambda v: (v, v))
    seq = D.pair_right_first(D.dmap(pair, lambda p: p[0]), D.dmap(pair, lambda p: p[1]))
    assert steps(seq) == 4
    assert D.run_for(D.pair_retraction(D.dmap(pair, lambda p: p[0]), D.dmap(pair, lambda p: p[1]))) == \
        Converged((1, 1), 2)


def test_iota_matches_first_projection_leg():
    # bind(iota(x, n), now . fst) against now(fst x) postponed n times
    d = D.bind(D.iota(("a", 1), 3), lambda p: D.now(p[0]))
    assert same(d, D.iota("a", 3), 5)


fns = st.sampled_from([
    lambda v: D.now(v + 1),
    lambda v: D.iota(v * 2, v % 3),
    lambda v: D.never() if v == 3 else D.later(D.now(v)),
])


@given(machines(), fns)
def test_monad_units(d, f):
    assert same(D.bind(d, D.now), d)
    for x in range(4):
        assert same(D.bind(D.now(x), f), f(x))


@given(machines(), fns, fns)
def test_associativity(d, f, g):
    assert same(D.bind(D.bind(d, f), g), D.bind(d, lambda v: D.bind(f(v), g)))


@given(machines(), fns)
def test_later_commutes_with_bind(d, f):
    lhs = D.bind(D.later(d), f)
    assert same(lhs, D.later(D.bind(d, f)))
    assert same(lhs, D.bind(d, lambda v: D.later(f(v))))
    assert same(D.strength("w", D.later(d)), D.later(D.strength("w", d)))


@given(machines(), machines())
def test_pairing_orders_commute(d, e):
    assert same(D.pair_right_first(d, e), D.pair_left_first(d, e))


@given(machines(), machines())
def test_race_step_exact(d, e):
    sd, se, sr = steps(d, DEPTH), steps(e, DEPTH), steps(D.race(d, e), DEPTH)
    arms = [s for s in (sd, se) if s is not None]
    assert sr == (min(arms) if arms else None)


@given(machines())
def test_pairing_section(d):
    pair = D.dmap(d, lambda v: (v, -v))
    back = D.pair_retraction(D.dmap(pair, lambda p: p[0]), D.dmap(pair, lambda p: p[1]))
    assert same(back, pair)


@given(machines(), st.integers(0, 30))
def test_observation_respects_fuel(d, fuel):
    obs = D.run_for(d, fuel)
    if isinstance(obs, Converged):
        assert obs.steps <= fuel
    else:
        assert D.bisim_weak_fuel(d, d, fuel) is ThreeValued.UNKNOWN


@settings(max_examples=50)
@given(machines())
def test_later_never_changes_weak_class(d):
    assert D.bisim_weak_fuel(D.later(d), d, 60) is not ThreeValued.FALSE


def test_delay_law_suite_passes():
    report = D.check_delay_laws(n=50)
    assert report.passed and not report.exact


def test_delay_law_suite_detects_a_bad_law():
    # strong bisimilarity must tell a postponed machine from the original
    assert not D.agree_to_depth(D.later(D.now(1)), D.now(1), 5)
