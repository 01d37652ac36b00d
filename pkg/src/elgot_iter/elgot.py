"""The Elgot iteration operator on the maybe backend, and Σ operations.

An :class:`ElgotBody` is a Kleisli map ``X -> Partial(Y + X)``. Its iterate
``f‡`` follows the path from the start state and is Bottom when the body is
Bottom or a state repeats, which on a finite state set is the least
fixpoint of ``g ↦ [η, g]* f``.

The law suites work on integer codes over states ``0..n-1``: ``-1`` is
Bottom, ``-2 - y`` is ``Value(Left y)`` and ``x >= 0`` is ``Value(Right x)``.
This is exactly the kernel encoding with exits into ``partial_carrier(Y)``
(Bottom first), so results are indices into that carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Mapping

from . import delay as D
from .finset import FinSet, Left, Right, UnknownState, oracle_iterate, preimages
from .kernels import DIVERGE, bounded_chain, bounded_from, iterate_all
from .partial import (
    BOTTOM,
    Determined,
    Unknown,
    Value,
    partial_carrier,
)
from .report import LawReport, timed

TOP = Value(())


# -- Elgot bodies ----------------------------------------------------------


@dataclass(frozen=True)
class ElgotBody:
    """A total table ``states -> Partial(Left y | Right x)``."""

    states: FinSet
    table: Mapping

    def __post_init__(self):
        if len(self.table) != len(self.states) or any(s not in self.table for s in self.states):
            raise ValueError("body must be defined on exactly the declared states")
        for s in self.states:
            p = self.table[s]
            if isinstance(p, Value) and isinstance(p.value, Right) and p.value.value not in self.states:
                raise UnknownState(p.value.value)

    @classmethod
    def from_function(cls, states: FinSet, fn: Callable) -> "ElgotBody":
        return cls(states, {s: fn(s) for s in states})

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise UnknownState(x) from None


def _encode(f: ElgotBody) -> tuple[list[int], list]:
    outputs: list = []
    seen: dict = {}
    code = []
    for x in f.states:
        p = f.table[x]
        if not isinstance(p, Value):
            code.append(-1)
        elif isinstance(p.value, Right):
            code.append(f.states.index(p.value.value))
        else:
            y = p.value.value
            if y not in seen:
                seen[y] = len(outputs)
                outputs.append(y)
            code.append(-2 - seen[y])
    return code, outputs


def _decode(r: int, outputs: list):
    return BOTTOM if r <= 0 else Value(outputs[r - 1])


def elgot_iterate(f: ElgotBody, x0):
    """``f‡(x0)``: Bottom on a Bottom step or a repeated state."""
    if x0 not in f.states:
        raise UnknownState(x0)
    code, outputs = _encode(f)
    return _decode(iterate_all(code)[f.states.index(x0)], outputs)


def elgot_iterate_fn(body: Callable[[Hashable], Any], x0, max_states: int | None = None,
                     on_visit: Callable[[Hashable], None] | None = None):
    """``f‡`` for a body given as a function with hashable states.

    The reachable part must be finite; ``max_states`` guards against runaway
    exploration (``None`` means unbounded). ``on_visit`` sees every state
    evaluated.
    """
    visited = set()
    x = x0
    while x not in visited:
        if max_states is not None and len(visited) >= max_states:
            raise RuntimeError(f"more than {max_states} states visited")
        visited.add(x)
        if on_visit is not None:
            on_visit(x)
        p = body(x)
        if not isinstance(p, Value):
            return BOTTOM
        e = p.value
        if isinstance(e, Left):
            return Value(e.value)
        x = e.value
    return BOTTOM


def bounded_elgot(f: ElgotBody, x0, n: int):
    """Fuel-``n`` approximant: ``n = 0`` is Bottom, each unit evaluates ``f`` once."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if x0 not in f.states:
        raise UnknownState(x0)
    code, outputs = _encode(f)
    return _decode(bounded_from(code, f.states.index(x0), n), outputs)


# -- the axiom suite -------------------------------------------------------


def default_dagger(code, ny: int) -> list[int]:
    """Least-fixpoint ``‡`` on codes; results index ``partial_carrier(Y)``."""
    return [0 if r == DIVERGE else r for r in iterate_all(code)]


def _bodies(nx: int, ny: int):
    return itertools.product(range(-1 - ny, nx), repeat=nx)


def _show(code) -> str:
    def one(c):
        if c == -1:
            return "Bottom"
        if c < -1:
            return f"Left({-c - 2})"
        return f"Right({c})"

    return "{" + ", ".join(f"{x}: {one(c)}" for x, c in enumerate(code)) + "}"


def check_elgot_monad_axioms(max_size: int = 2, extended_size: int = 3,
                             dagger: Callable[[list, int], list] = default_dagger) -> LawReport:
    """Fixpoint, Naturality, Codiagonal, Uniformity and Strength exhaustively
    at sizes up to ``max_size``; Fixpoint and Uniformity up to ``extended_size``.
    Also Leastness and ``f‡ = (f* dom f‡)‡`` at ``max_size``."""
    report = LawReport("elgot-monad")
    extended_size = max(extended_size, max_size)
    with timed(report):
        _fixpoint(report, extended_size, dagger)
        _naturality(report, max_size, dagger)
        _codiagonal(report, max_size, dagger)
        _uniformity(report, max_size, extended_size, dagger)
        _strength(report, max_size, dagger)
        _leastness(report, max_size, dagger)
        _restricted_unfold(report, max_size, dagger)
    return report


def _fixpoint(report, size, dagger):
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            for f in _bodies(nx, ny):
                sol = dagger(f, ny)
                for x, c in enumerate(f):
                    rhs = 0 if c == -1 else (-c - 1 if c < 0 else sol[c])
                    report.check("Fixpoint", sol[x], rhs, lambda: f"f={_show(f)}, x={x}")


def _naturality(report, size, dagger):
    # g* f‡ = ([T inl . g, η inr]* f)‡
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            for nz in range(size + 1):
                gs = list(itertools.product(range(nz + 1), repeat=ny))
                for f in _bodies(nx, ny):
                    sol = dagger(f, ny)
                    for g in gs:
                        rhs = dagger([(-1 - g[-c - 2]) if c < -1 else c for c in f], nz)
                        for x in range(nx):
                            lhs = 0 if sol[x] == 0 else g[sol[x] - 1]
                            report.check("Naturality", lhs, rhs[x], lambda: f"f={_show(f)}, g={g}, x={x}")


def _codiagonal(report, size, dagger):
    # (T[id, inr] f)‡ = f‡‡ for f: X -> T((Y + X) + X)
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            options = ([("bot",)] + [("ll", y) for y in range(ny)]
                       + [("lr", x) for x in range(nx)] + [("r", x) for x in range(nx)])
            for f in itertools.product(options, repeat=nx):
                flat = [-1 if o[0] == "bot" else (-2 - o[1] if o[0] == "ll" else o[1]) for o in f]
                lhs = dagger(flat, ny)
                inner_code = [-1 if o[0] == "bot" else -2 - o[1] if o[0] == "ll"
                              else -2 - (ny + o[1]) if o[0] == "lr" else o[1] for o in f]
                inner = dagger(inner_code, ny + nx)
                outer = [-1 if r == 0 else (-1 - r if r - 1 < ny else r - 1 - ny) for r in inner]
                rhs = dagger(outer, ny)
                for x in range(nx):
                    report.check("Codiagonal", lhs[x], rhs[x], lambda: f"f={f}, x={x}")


def _uniformity(report, size, extended, dagger):
    # f h = T(id + h) g  implies  f‡ h = g‡, with g rebuilt from f and h
    for nx in range(1, extended + 1):
        for nz in range(1, extended + 1):
            for ny in range(size + 1):
                hs = list(itertools.product(range(nx), repeat=nz))
                for f in _bodies(nx, ny):
                    fsol = dagger(f, ny)
                    for h in hs:
                        pre = preimages(h, nx)
                        choices = [(f[h[z]],) if f[h[z]] < 0 else pre[f[h[z]]] for z in range(nz)]
                        if any(not c for c in choices):
                            continue
                        for g in itertools.product(*choices):
                            gsol = dagger(list(g), ny)
                            for z in range(nz):
                                report.check("Uniformity", fsol[h[z]], gsol[z],
                                             lambda: f"f={_show(f)}, g={_show(g)}, h={h}, z={z}")


def _strength(report, size, dagger):
    # τ (id × f‡) = ((T dstr) τ (id × f))‡ over W × X; pairs are indexed w*n + i
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            for nw in range(1, size + 1):
                for f in _bodies(nx, ny):
                    sol = dagger(f, ny)
                    body = []
                    for w in range(nw):
                        for c in f:
                            body.append(-1 if c == -1 else (-2 - (w * ny + (-c - 2)) if c < -1 else w * nx + c))
                    rhs = dagger(body, nw * ny)
                    for w in range(nw):
                        for x in range(nx):
                            lhs = 0 if sol[x] == 0 else 1 + w * ny + sol[x] - 1
                            report.check("Strength", lhs, rhs[w * nx + x], lambda: f"f={_show(f)}, w={w}, x={x}")


def _leastness(report, size, dagger):
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            gs = list(itertools.product(range(ny + 1), repeat=nx))
            for f in _bodies(nx, ny):
                sol = dagger(f, ny)
                for g in gs:
                    unfolded = [0 if c == -1 else (-c - 1 if c < 0 else g[c]) for c in f]
                    if not all(u == 0 or u == v for u, v in zip(unfolded, g)):
                        continue
                    ok = all(a == 0 or a == b for a, b in zip(sol, g))
                    report.check("Leastness", ok, True, lambda: f"f={_show(f)}, g={g}")


def _restricted_unfold(report, size, dagger):
    # f‡ = (f* . dom f‡)‡
    for nx in range(1, size + 1):
        for ny in range(size + 1):
            for f in _bodies(nx, ny):
                sol = dagger(f, ny)
                rhs = dagger([-1 if sol[x] == 0 else c for x, c in enumerate(f)], ny)
                for x in range(nx):
                    report.check("restricted-unfold", sol[x], rhs[x], lambda: f"f={_show(f)}, x={x}")


def check_rearrangement(max_states: int = 3, max_values: int = 2) -> LawReport:
    """``f† = ([T inl, η inr] f)‡`` against the brute-force oracle, plus
    agreement of the kernel iteration with the oracle."""
    from .algebra import LoopBody
    from .partial import iterate_partial

    report = LawReport("rearrangement")
    for n in range(1, max_states + 1):
        S = FinSet(tuple(range(n)))
        for m in range(max_values + 1):
            carrier = partial_carrier(range(m)).elements
            for code in itertools.product(range(-len(carrier), n), repeat=n):
                loop = LoopBody(S, {s: (Left(carrier[-c - 1]) if c < 0 else Right(c)) for s, c in enumerate(code)})
                body = ElgotBody(S, {s: (Value(e) if isinstance(e, Right)
                                         else (BOTTOM if e.value is BOTTOM else Value(Left(e.value.value))))
                                     for s, e in loop.table.items()})
                for s in S:
                    oracle = oracle_iterate(loop, s)
                    report.check("oracle-vs-kernel", iterate_partial(loop, s), oracle, lambda: f"{loop!r}, s={s}")
                    report.check("oracle-vs-rearranged", elgot_iterate(body, s), oracle, lambda: f"{loop!r}, s={s}")
    return report


def check_bounded_elgot(max_states: int = 4, max_values: int = 2) -> LawReport:
    """Bounded approximants: monotone chain, below the iterate, equal to it from ``|X|+1`` on."""
    report = LawReport("bounded-elgot")
    for nx in range(1, max_states + 1):
        for ny in range(max_values + 1):
            for f in _bodies(nx, ny):
                full = default_dagger(f, ny)
                for x in range(nx):
                    chain = [0 if r == DIVERGE else r for r in bounded_chain(f, x, nx + 1)]
                    where = lambda: f"f={_show(f)}, x={x}"
                    report.check("bounded-n0", chain[0], 0, where)
                    report.check("chain-monotone",
                                 all(a == 0 or a == b for a, b in zip(chain, chain[1:])), True, where)
                    report.check("bounded-below-full", all(a == 0 or a == full[x] for a in chain), True, where)
                    report.check("stabilization", chain[nx + 1], full[x], where)
    return report


# -- Σ ---------------------------------------------------------------------


@dataclass(frozen=True)
class EventuallyConstant:
    """The sequence ``prefix[0], prefix[1], ..., tail, tail, ...``."""

    prefix: tuple
    tail: Any

    def __call__(self, i: int):
        return self.prefix[i] if i < len(self.prefix) else self.tail


def _unit(_):
    return ()


def sigma_meet(a, b):
    """Sequential conjunction: both must terminate; delay steps add."""
    if isinstance(a, D.Delay):
        return D.dmap(D.pair_right_first(a, b), _unit)
    return TOP if a == TOP and b == TOP else BOTTOM


def sigma_join(a, b):
    """Parallel disjunction: terminates as soon as either side does."""
    if isinstance(a, D.Delay):
        return D.dmap(D.race(a, b), _unit)
    return TOP if a == TOP or b == TOP else BOTTOM


def dovetail_index(i: int, d: int) -> int:
    """Step at which the dovetail examines machine ``i`` at depth ``d``."""
    n = i + d
    return n * (n + 1) // 2 + i


class _DovetailStep:
    """States ``(n, i)``: examine machine ``i`` at depth ``n - i``."""

    __slots__ = ("seq", "_memo")

    def __init__(self, seq):
        self.seq = seq
        self._memo = {}

    def _machine(self, i):
        d = self._memo.get(i)
        if d is None:
            d = self._memo[i] = self.seq(i)
        return d

    def __call__(self, state):
        n, i = state
        if isinstance(D.run_for(self._machine(i), n - i), D.Converged):
            return Left(())
        return Right((n, i + 1) if i < n else (n + 1, 0))


def sigma_omega_join(seq: Callable[[int], Any], *, backend: str | None = None, bound: int | None = None,
                     fuel: int = D.DEFAULT_FUEL):
    """Countable join.

    Delay backend (``seq`` yields machines): a dovetailing machine that, at
    step ``k``, checks whether one machine ``i`` has returned within ``d``
    steps, pairs ordered by ``i + d`` then ``i``.

    Maybe backend (``seq`` yields ``TOP``/``BOTTOM``): exact for an
    :class:`EventuallyConstant` sequence or when ``bound`` declares that only
    indices below it matter; otherwise the dovetail of the embedded machines
    is run for ``fuel`` steps and a ``Determined``/``Unknown`` is returned.
    """
    if backend is None:
        backend = "maybe" if isinstance(seq, EventuallyConstant) or bound is not None else "delay"
    if backend == "delay":
        return D.Delay((0, 0), _DovetailStep(seq))
    if isinstance(seq, EventuallyConstant):
        return TOP if TOP in seq.prefix or seq.tail == TOP else BOTTOM
    if bound is not None:
        return TOP if any(seq(i) == TOP for i in range(bound)) else BOTTOM
    embedded = D.Delay((0, 0), _DovetailStep(lambda i: D.now(()) if seq(i) == TOP else D.never()))
    obs = D.run_for(embedded, fuel)
    return Determined(TOP) if isinstance(obs, D.Converged) else Unknown(obs.residual)


def check_sigma_laws(fuel: int = 50, max_prefix: int = 3) -> LawReport:
    """Distributive-lattice laws (exact on the maybe backend, fuel-bounded
    weak bisimilarity on delay machines), step-exactness of join, and the
    frame law on eventually-constant sequences."""
    report = LawReport("sigma")
    with timed(report):
        _lattice_laws(report, (TOP, BOTTOM), lambda a, b: a == b, "maybe")
        machines = [D.iota((), k) for k in (0, 1, 3, 7, 20)] + [D.never()]

        def weak(d1, d2):
            o1, o2 = D.run_for(d1, fuel), D.run_for(d2, fuel)
            conv1, conv2 = isinstance(o1, D.Converged), isinstance(o2, D.Converged)
            return conv1 == conv2

        _lattice_laws(report, machines, weak, "delay")
        for a, b in itertools.product(machines, repeat=2):
            oa, ob, oj = D.run_for(a, fuel), D.run_for(b, fuel), D.run_for(sigma_join(a, b), fuel)
            steps = [o.steps for o in (oa, ob) if isinstance(o, D.Converged)]
            expected = min(steps) if steps else None
            got = oj.steps if isinstance(oj, D.Converged) else None
            report.check("join-step-exact", got, expected, lambda: f"a={a!r}, b={b!r}")
        for k in range(max_prefix + 1):
            for prefix in itertools.product((TOP, BOTTOM), repeat=k):
                for tail in (TOP, BOTTOM):
                    seq = EventuallyConstant(prefix, tail)
                    for a in (TOP, BOTTOM):
                        met = EventuallyConstant(tuple(sigma_meet(a, b) for b in prefix), sigma_meet(a, tail))
                        report.check("frame", sigma_meet(a, sigma_omega_join(seq)), sigma_omega_join(met),
                                     lambda: f"a={a!r}, seq={seq!r}")
                        # a bound past the prefix sees the tail too
                        report.check("frame-bounded", sigma_omega_join(seq, bound=k + 1), sigma_omega_join(seq),
                                     lambda: f"seq={seq!r}")
    return report


def _lattice_laws(report: LawReport, values, eq, tag: str):
    meet, join = sigma_meet, sigma_join
    for a in values:
        report.check(f"{tag}:meet-idempotent", meet(a, a), a, lambda: f"a={a!r}", eq=eq)
        report.check(f"{tag}:join-idempotent", join(a, a), a, lambda: f"a={a!r}", eq=eq)
        for b in values:
            where = lambda: f"a={a!r}, b={b!r}"
            report.check(f"{tag}:meet-commutative", meet(a, b), meet(b, a), where, eq=eq)
            report.check(f"{tag}:join-commutative", join(a, b), join(b, a), where, eq=eq)
            report.check(f"{tag}:absorption-join", join(a, meet(a, b)), a, where, eq=eq)
            report.check(f"{tag}:absorption-meet", meet(a, join(a, b)), a, where, eq=eq)
            for c in values:
                where3 = lambda: f"a={a!r}, b={b!r}, c={c!r}"
                report.check(f"{tag}:meet-associative", meet(a, meet(b, c)), meet(meet(a, b), c), where3, eq=eq)
                report.check(f"{tag}:join-associative", join(a, join(b, c)), join(join(a, b), c), where3, eq=eq)
                report.check(f"{tag}:distributive", meet(a, join(b, c)), join(meet(a, b), meet(a, c)), where3, eq=eq)
                report.check(f"{tag}:codistributive", join(a, meet(b, c)), meet(join(a, b), join(a, c)), where3,
                             eq=eq)
    if tag == "delay":
        report.exact = False
