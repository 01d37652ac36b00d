"""The delay monad as explicit step machines.

A :class:`Delay` is a seed state plus a pure, total ``step`` function that
maps a state either to ``Left(value)`` (the computation has returned) or to
``Right(next_state)`` (one more unit of time passes). Every operation below
builds a new machine whose states are built from the component states, so
``step`` stays total and observation under a fuel bound always terminates.

There is no decidable equality on machines. Compare them with
:func:`bisim_strong_fuel` / :func:`bisim_weak_fuel`, which answer
``TRUE``, ``FALSE`` or ``UNKNOWN``.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from typing import Any, Callable, Generic, TypeVar

from .finset import Left, Right

X = TypeVar("X")
Y = TypeVar("Y")

DEFAULT_FUEL = 1000


@dataclass(frozen=True, eq=False)
class Delay(Generic[X]):
    seed: Any
    step: Callable[[Any], Any]

    def __repr__(self):
        return f"<Delay {describe(self)}>"


class ThreeValued(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self):
        raise TypeError("ThreeValued has no truth value; compare against a member")


@dataclass(frozen=True)
class Converged(Generic[X]):
    value: X
    steps: int


@dataclass(frozen=True)
class StillRunning(Generic[X]):
    residual: Delay[X]


Observation = Converged | StillRunning


# -- step functions --------------------------------------------------------
# Named callables rather than closures so that composite constructors can
# recognise (and flatten) their own machines.


def _exit(state):
    return Left(state)


def _spin(state):
    return Right(state)


class _IotaStep:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __call__(self, k):
        return Left(self.value) if k == 0 else Right(k - 1)


class _LaterStep:
    """States are ``(pending, inner_state)``."""

    __slots__ = ("inner",)

    def __init__(self, inner):
        self.inner = inner

    def __call__(self, state):
        pending, s = state
        if pending:
            return Right((pending - 1, s))
        r = self.inner(s)
        if isinstance(r, Left):
            return r
        return Right((0, r.value))


class _MapStep:
    __slots__ = ("inner", "fn")

    def __init__(self, inner, fn):
        self.inner = inner
        self.fn = fn

    def __call__(self, s):
        r = self.inner(s)
        if isinstance(r, Left):
            return Left(self.fn(r.value))
        return r


class _BindStep:
    """States are ``("L", s)`` while running the first machine and
    ``("R", x, s)`` while running ``f(x)``."""

    __slots__ = ("inner", "fn", "_memo")

    def __init__(self, inner, fn):
        self.inner = inner
        self.fn = fn
        self._memo = {}

    def _continuation(self, x) -> Delay:
        try:
            d = self._memo.get(x)
        except TypeError:
            return self.fn(x)
        if d is None:
            d = self.fn(x)
            self._memo[x] = d
        return d

    def __call__(self, state):
        if state[0] == "L":
            r = self.inner(state[1])
            if isinstance(r, Right):
                return Right(("L", r.value))
            x = r.value
            k = self._continuation(x)
            s = k.seed
        else:
            _, x, s = state
            k = self._continuation(x)
        r = k.step(s)
        if isinstance(r, Left):
            return r
        return Right(("R", x, r.value))


class _RaceStep:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __call__(self, state):
        s1, s2 = state
        r1 = self.left(s1)
        if isinstance(r1, Left):
            return Left(Left((r1.value, Delay(s2, self.right))))
        r2 = self.right(s2)
        if isinstance(r2, Left):
            return Left(Right((Delay(s1, self.left), r2.value)))
        return Right((r1.value, r2.value))


class _IterStep:
    """Kleisli iteration of ``fn: Z -> Delay(A + Z)``.

    States are ``(z, s)``: running ``fn(z)`` in state ``s``. A loop-back that
    costs no time is followed within the same step; a cycle of such
    zero-time loop-backs can never produce a step, so the machine moves to
    the absorbing state ``None``.
    """

    __slots__ = ("fn", "_memo")

    def __init__(self, fn):
        self.fn = fn
        self._memo = {}

    def _body(self, z) -> Delay:
        try:
            d = self._memo.get(z)
        except TypeError:
            return self.fn(z)
        if d is None:
            d = self.fn(z)
            self._memo[z] = d
        return d

    def __call__(self, state):
        if state is None:
            return Right(None)
        z, s = state
        visited = set()
        while True:
            r = self._body(z).step(s)
            if isinstance(r, Right):
                return Right((z, r.value))
            e = r.value
            if isinstance(e, Left):
                return Left(e.value)
            z = e.value
            try:
                if z in visited:
                    return Right(None)
                visited.add(z)
            except TypeError:
                pass
            s = self._body(z).seed


# -- constructors ----------------------------------------------------------


def now(x: X) -> Delay[X]:
    return Delay(x, _exit)


def never() -> Delay:
    """The machine that never returns."""
    return Delay(None, _spin)


def later(d: Delay[X]) -> Delay[X]:
    """Postpone ``d`` by exactly one step."""
    if isinstance(d.step, _LaterStep):
        pending, s = d.seed
        return Delay((pending + 1, s), d.step)
    return Delay((1, d.seed), _LaterStep(d.step))


def coit(f: Callable[[Y], Any], y0: Y) -> Delay:
    """Coiterate ``f: Y -> X + Y`` from ``y0``."""
    return Delay(y0, f)


def finite_machine(table, seed) -> Delay:
    """Machine given by a finite table ``state -> Left(value) | Right(state)``."""
    return Delay(seed, table.__getitem__)


def iota(x: X, n: int) -> Delay[X]:
    """``later^n(now(x))``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Delay(n, _IotaStep(x))


# -- destructors -----------------------------------------------------------


def out(d: Delay[X]):
    """``Left(value)`` or ``Right(residual)`` after one step."""
    r = d.step(d.seed)
    if isinstance(r, Left):
        return r
    return Right(Delay(r.value, d.step))


def run_for(d: Delay[X], fuel: int = DEFAULT_FUEL) -> Observation:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    step = d.step
    s = d.seed
    k = 0
    while True:
        r = step(s)
        if isinstance(r, Left):
            return Converged(r.value, k)
        if k == fuel:
            return StillRunning(Delay(s, step))
        s = r.value
        k += 1


def describe(d: Delay, fuel: int = 50) -> str:
    obs = run_for(d, fuel)
    if isinstance(obs, Converged):
        return f"returns {obs.value!r} after {obs.steps} steps"
    return f"still running after {fuel} steps"


# -- monad structure -------------------------------------------------------


def bind(d: Delay[X], f: Callable[[X], Delay[Y]]) -> Delay[Y]:
    return Delay(("L", d.seed), _BindStep(d.step, f))


def dmap(d: Delay[X], g: Callable[[X], Y]) -> Delay[Y]:
    return bind(d, lambda x: now(g(x)))


def mu(dd: Delay[Delay[X]]) -> Delay[X]:
    return bind(dd, lambda d: d)


def kleisli(g: Callable[[Y], Delay], f: Callable[[X], Delay[Y]]) -> Callable[[X], Delay]:
    """Kleisli composite ``g* . f``."""
    return lambda x: bind(f(x), g)


def strength(x, d: Delay[Y]) -> Delay:
    """``X x DY -> D(X x Y)``; step counts are preserved exactly."""
    return Delay(d.seed, _MapStep(d.step, lambda y: (x, y)))


def costrength(d: Delay[X], y) -> Delay:
    """``DX x Y -> D(X x Y)``."""
    return Delay(d.seed, _MapStep(d.step, lambda x: (x, y)))


def pair_right_first(d1: Delay[X], d2: Delay[Y]) -> Delay:
    """Run ``d2`` to completion, then ``d1``; steps add."""
    return bind(strength(d1, d2), lambda p: costrength(p[0], p[1]))


def pair_left_first(d1: Delay[X], d2: Delay[Y]) -> Delay:
    """Run ``d1`` to completion, then ``d2``; steps add."""
    return bind(costrength(d1, d2), lambda p: strength(p[0], p[1]))


def race(d1: Delay[X], d2: Delay[Y]) -> Delay:
    """Run both machines in lockstep until one returns.

    Result is ``Left((x, residual of d2))`` or ``Right((residual of d1, y))``;
    on simultaneous return the ``Left`` side wins.
    """
    return Delay((d1.seed, d2.seed), _RaceStep(d1.step, d2.step))


def iterate(f: Callable[[Any], Delay], z0) -> Delay:
    """Kleisli iteration ``f‡`` for ``f: Z -> D(A + Z)``.

    Satisfies ``f‡ = [now, f‡]* f`` step-exactly. Loop-backs that take no time
    are chased within one step, so ``Z`` states must be hashable for a
    zero-time cycle to be recognised as divergence.
    """
    step = _IterStep(f)
    return Delay((z0, step._body(z0).seed), step)


def pair_retraction(d1: Delay[X], d2: Delay[Y]) -> Delay:
    """Retraction of ``<map fst, map snd>: D(X x Y) -> DX x DY``.

    Sequencing the pair doubles the step count of a machine that was split
    by the projections; the iterated ``halve`` body consumes two input steps
    per output step.
    """

    def halve(e: Delay):
        r = out(e)
        if isinstance(r, Left):
            return now(Left(r.value))
        return later(now(out(r.value)))

    return iterate(halve, pair_right_first(d1, d2))


# -- bounded bisimilarity --------------------------------------------------


def bisim_strong_fuel(d1: Delay, d2: Delay, fuel: int = DEFAULT_FUEL, eq=operator.eq) -> ThreeValued:
    """Compare unfoldings step by step up to depth ``fuel``.

    FALSE on the first mismatch (one side returns while the other does not,
    or both return unequal values), TRUE when both return equal values at
    the same step, UNKNOWN when both are still running at depth ``fuel``.
    """
    s1, s2 = d1.seed, d2.seed
    for _ in range(fuel + 1):
        r1 = d1.step(s1)
        r2 = d2.step(s2)
        left1 = isinstance(r1, Left)
        left2 = isinstance(r2, Left)
        if left1 and left2:
            return ThreeValued.TRUE if eq(r1.value, r2.value) else ThreeValued.FALSE
        if left1 or left2:
            return ThreeValued.FALSE
        s1, s2 = r1.value, r2.value
    return ThreeValued.UNKNOWN


def bisim_weak_fuel(d1: Delay, d2: Delay, fuel: int = DEFAULT_FUEL, eq=operator.eq) -> ThreeValued:
    """TRUE only when both return equal values within ``fuel`` steps.

    Divergence is never witnessed: if either side is still running the
    answer is UNKNOWN.
    """
    o1 = run_for(d1, fuel)
    o2 = run_for(d2, fuel)
    if isinstance(o1, Converged) and isinstance(o2, Converged):
        return ThreeValued.TRUE if eq(o1.value, o2.value) else ThreeValued.FALSE
    return ThreeValued.UNKNOWN


def agree_to_depth(d1: Delay, d2: Delay, depth: int, eq=operator.eq) -> bool:
    """Depth-``depth`` strong bisimilarity: no mismatch among the first
    ``depth`` unfoldings."""
    return bisim_strong_fuel(d1, d2, depth, eq) is not ThreeValued.FALSE


# -- law suite -------------------------------------------------------------


def random_machine(rng, max_states: int = 6, values=range(4), diverge: float = 0.15) -> Delay:
    """A seeded random finite-table machine, sometimes wrapped in laters."""
    values = list(values)
    k = rng.randint(1, max_states)
    table = {}
    for s in range(k):
        if rng.random() < 0.3 and rng.random() > diverge:
            table[s] = Left(rng.choice(values))
        else:
            table[s] = Right(rng.randrange(k))
    if rng.random() > diverge:
        table[k - 1] = Left(rng.choice(values))
    d = finite_machine(table, rng.randrange(k))
    for _ in range(rng.randint(0, 2)):
        d = later(d)
    return d


def random_kleisli(rng, values=range(4), **kw) -> Callable[[Any], Delay]:
    table = {v: random_machine(rng, values=values, **kw) for v in values}
    return table.__getitem__


def _out_agree(o1, o2, depth: int) -> bool:
    if isinstance(o1, Left) and isinstance(o2, Left):
        return o1.value == o2.value
    if isinstance(o1, Right) and isinstance(o2, Right):
        return agree_to_depth(o1.value, o2.value, max(depth - 1, 0))
    return False


def check_delay_laws(n: int = 200, depth: int = 50, seed: int = 0):
    """Monad laws, the unfolding characterizations of bind and strength,
    later-commutation, commutativity, the pairing section and race
    step-exactness, as depth-``depth`` strong bisimilarity on ``n`` seeded
    random machines per law."""
    import random

    from .report import LawReport, timed

    rng = random.Random(seed)
    report = LawReport("delay")
    report.exact = False

    def same(d1, d2):
        return agree_to_depth(d1, d2, depth)

    with timed(report):
        for i in range(n):
            d = random_machine(rng)
            e = random_machine(rng)
            f = random_kleisli(rng)
            g = random_kleisli(rng)
            x = rng.randrange(4)
            where = lambda: f"case {i} (seed {seed})"
            report.check("left-unit", bind(now(x), f), f(x), where, eq=same)
            report.check("right-unit", bind(d, now), d, where, eq=same)
            report.check("associativity", bind(bind(d, f), g), bind(d, lambda v: bind(f(v), g)), where, eq=same)
            report.check("map-via-bind", dmap(d, lambda v: v + 1), bind(d, lambda v: now(v + 1)), where, eq=same)
            report.check("mu-via-bind", mu(dmap(d, f)), bind(d, f), where, eq=same)
            # out . f* = [out f, inr f*] . out
            o = out(d)
            expected = out(f(o.value)) if isinstance(o, Left) else Right(bind(o.value, f))
            report.check("bind-unfolding", out(bind(d, f)), expected, where, eq=lambda a, b: _out_agree(a, b, depth))
            # out . τ = (id + τ) dstr (id × out)
            expected = Left((x, o.value)) if isinstance(o, Left) else Right(strength(x, o.value))
            report.check("strength-unfolding", out(strength(x, d)), expected, where,
                         eq=lambda a, b: _out_agree(a, b, depth))
            report.check("strength-unit", strength(x, now(x)), now((x, x)), where, eq=same)
            report.check("later-bind", bind(later(d), f), later(bind(d, f)), where, eq=same)
            report.check("bind-later", bind(d, lambda v: later(f(v))), later(bind(d, f)), where, eq=same)
            report.check("later-strength", strength(x, later(d)), later(strength(x, d)), where, eq=same)
            report.check("coit-unfolding", out(coit(d.step, d.seed)), out(d), where,
                         eq=lambda a, b: _out_agree(a, b, depth))
            report.check("commutative", pair_right_first(d, e), pair_left_first(d, e), where, eq=same)
            pair = dmap(d, lambda v: (v, v + 1))
            report.check("pairing-section", pair_retraction(dmap(pair, lambda p: p[0]), dmap(pair, lambda p: p[1])),
                         pair, where, eq=same)
            od, oe, orace = run_for(d, depth), run_for(e, depth), run_for(race(d, e), depth)
            steps = [ob.steps for ob in (od, oe) if isinstance(ob, Converged)]
            got = orace.steps if isinstance(orace, Converged) else None
            report.check("race-step-exact", got, min(steps) if steps else None, where)
    return report
