"""Extensional partiality: the maybe backend and the delay-quotient backend.

``Value(x)`` / ``BOTTOM`` form the exact backend. Its Kleisli maps on finite
sets (:class:`FinKleisli`) carry the restriction structure ``dom``,
``restrict`` and ``leq``. Loop iteration over a finite state set is the
least fixpoint, found by following the loop and stopping at the first
repeated state.

The delay-quotient backend collapses a :class:`~elgot_iter.delay.Delay`
machine to a Partial value, either under a fuel bound (three-valued) or
exactly when the machine carries a finite-state certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator

from . import delay as D
from .finset import (
    FinSet,
    Left,
    Right,
    UnknownState,
    coproduct,
    dstr,
    instance_budget,
    product,
)
from .kernels import DIVERGE, bounded_chain, bounded_from, exit_code, iterate_from
from .report import LawReport


class DomainMismatch(ValueError):
    pass


class InvalidCertificate(ValueError):
    pass


# -- Partial values --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Value:
    value: Any

    def __repr__(self):
        return f"Value({self.value!r})"


class _Bottom:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Bottom"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()
Partial = Value | _Bottom


def is_value(p) -> bool:
    return isinstance(p, Value)


def eta(x) -> Value:
    return Value(x)


def bind(p, f: Callable[[Any], Any]):
    if isinstance(p, Value):
        return f(p.value)
    return BOTTOM


def pmap(p, g: Callable[[Any], Any]):
    if isinstance(p, Value):
        return Value(g(p.value))
    return BOTTOM


def mu(pp):
    return bind(pp, lambda p: p)


def strength(x, p):
    """``X x KY -> K(X x Y)``; strict in the second argument."""
    if isinstance(p, Value):
        return Value((x, p.value))
    return BOTTOM


def costrength(p, y):
    if isinstance(p, Value):
        return Value((p.value, y))
    return BOTTOM


def pleq(a, b) -> bool:
    """Restriction order on single values: ``a`` is Bottom or equals ``b``."""
    return a is BOTTOM or a == b


def partial_carrier(xs: Iterable) -> FinSet:
    """``K X`` as a finite set; Bottom first."""
    return FinSet((BOTTOM,) + tuple(Value(x) for x in xs))


def sequence_pair(a, b):
    """``τ̂* τ``: pair two partial values, defined iff both are."""
    return bind(strength(a, b), lambda p: costrength(p[0], p[1]))


def sequence_pair_swapped(a, b):
    """``τ* τ̂``."""
    return bind(costrength(a, b), lambda p: strength(p[0], p[1]))


# -- finite Kleisli maps ---------------------------------------------------


@dataclass(frozen=True)
class FinKleisli:
    """A total table ``domain -> Partial(codomain)``."""

    domain: FinSet
    table: tuple
    codomain: FinSet | None = None

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != len(self.domain):
            raise ValueError(f"table has {len(table)} entries for a domain of {len(self.domain)}")

    @classmethod
    def from_function(cls, domain: FinSet, fn: Callable, codomain: FinSet | None = None) -> "FinKleisli":
        return cls(domain, tuple(fn(x) for x in domain), codomain)

    @classmethod
    def from_mapping(cls, domain: FinSet, mapping, codomain: FinSet | None = None) -> "FinKleisli":
        return cls(domain, tuple(mapping[x] for x in domain), codomain)

    def __call__(self, x):
        return self.table[self.domain.index(x)]

    def items(self):
        return zip(self.domain.elements, self.table)

    def __repr__(self):
        body = ", ".join(f"{x!r}: {p!r}" for x, p in self.items())
        return "{" + body + "}"


def all_kleisli(domain: FinSet, codomain: FinSet) -> Iterator[FinKleisli]:
    carrier = partial_carrier(codomain).elements
    for table in itertools.product(carrier, repeat=len(domain)):
        yield FinKleisli(domain, table, codomain)


def bottom_map(domain: FinSet, codomain: FinSet | None = None) -> FinKleisli:
    return FinKleisli(domain, (BOTTOM,) * len(domain), codomain)


def eta_map(domain: FinSet) -> FinKleisli:
    return FinKleisli(domain, tuple(Value(x) for x in domain), domain)


def compose(g: Callable, f: FinKleisli) -> FinKleisli:
    """Kleisli composite ``g* . f``."""
    cod = g.codomain if isinstance(g, FinKleisli) else None
    return FinKleisli(f.domain, tuple(bind(p, g) for p in f.table), cod)


def kmap(h: Callable, f: FinKleisli, codomain: FinSet | None = None) -> FinKleisli:
    """``(K h) . f``."""
    return FinKleisli(f.domain, tuple(pmap(p, h) for p in f.table), codomain)


def copair(f: FinKleisli, g: FinKleisli) -> FinKleisli:
    """``[f, g]`` on ``X + Y``."""
    return FinKleisli(coproduct(f.domain, g.domain), f.table + g.table, f.codomain)


def _same_domain(f: FinKleisli, g: FinKleisli) -> None:
    if f.domain != g.domain:
        raise DomainMismatch(f"{f.domain!r} vs {g.domain!r}")


def dom(f: FinKleisli) -> FinKleisli:
    """Domain of definiteness ``(K fst) τ <id, f>``."""
    return FinKleisli(
        f.domain,
        tuple(pmap(strength(x, p), lambda pair: pair[0]) for x, p in f.items()),
        f.domain,
    )


def restrict(f: FinKleisli, g: FinKleisli) -> FinKleisli:
    """``f`` restricted to the domain of ``g``: ``fst* τ <f, g>``."""
    _same_domain(f, g)
    return FinKleisli(
        f.domain,
        tuple(bind(strength(p, q), lambda pair: pair[0]) for p, q in zip(f.table, g.table)),
        f.codomain,
    )


def leq(f: FinKleisli, g: FinKleisli) -> bool:
    """``f ⊑ g`` iff ``f = g ↾ f``."""
    _same_domain(f, g)
    if f.codomain is not None and g.codomain is not None and f.codomain != g.codomain:
        raise DomainMismatch(f"codomains {f.codomain!r} vs {g.codomain!r}")
    return f.table == restrict(g, f).table


# -- iteration on the Partial carrier --------------------------------------


def encode_loop(loop) -> tuple[list[int], list]:
    """Encode ``loop.states``/``loop.table`` for the kernels.

    Returns ``(code, payloads)`` where exits refer to positions in ``payloads``.
    """
    states = loop.states
    payloads: list = []
    seen: dict = {}
    code = []
    for s in states:
        step = loop.table[s]
        if isinstance(step, Left):
            p = step.value
            try:
                i = seen.get(p)
                if i is None:
                    i = seen[p] = len(payloads)
                    payloads.append(p)
            except TypeError:
                i = len(payloads)
                payloads.append(p)
            code.append(exit_code(i))
        elif isinstance(step, Right):
            if step.value not in states:
                raise UnknownState(step.value)
            code.append(states.index(step.value))
        else:
            raise TypeError(f"body({s!r}) = {step!r} is neither Left nor Right")
    return code, payloads


def _start_index(loop, s0) -> int:
    if s0 not in loop.states:
        raise UnknownState(s0)
    return loop.states.index(s0)


def iterate_partial(loop, s0):
    """Least fixpoint of ``[id, -] . body`` at ``s0``.

    The first reachable exit payload (Bottom if that payload is Bottom), or
    Bottom when the path from ``s0`` revisits a state.
    """
    start = _start_index(loop, s0)
    code, payloads = encode_loop(loop)
    r = iterate_from(code, start)
    return BOTTOM if r == DIVERGE else payloads[r]


def iterate_partial_fn(body: Callable[[Hashable], Any], s0):
    """Like :func:`iterate_partial` for a body given as a function.

    The reachable state space must be finite; states must be hashable.
    """
    visited = set()
    s = s0
    while s not in visited:
        visited.add(s)
        step = body(s)
        if isinstance(step, Left):
            return step.value
        s = step.value
    return BOTTOM


def bounded_iterate(loop, s0, n: int):
    """Bounded iteration by primitive recursion on ``n``.

    ``n = 0`` gives Bottom; ``n + 1`` evaluates the body once and either
    returns the exit payload or recurses with ``n`` on the next state.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    start = _start_index(loop, s0)
    code, payloads = encode_loop(loop)
    r = bounded_from(code, start, n)
    return BOTTOM if r == DIVERGE else payloads[r]


def bounded_chain_partial(loop, s0, n_max: int) -> list:
    start = _start_index(loop, s0)
    code, payloads = encode_loop(loop)
    return [BOTTOM if r == DIVERGE else payloads[r] for r in bounded_chain(code, start, n_max)]


def kleene_check(loop, s0, report: LawReport | None = None) -> LawReport:
    """Bounded iterates approach the full iterate from below and reach it by ``|S|+1``."""
    report = report if report is not None else LawReport("kleene")
    full = iterate_partial(loop, s0)
    n_stable = len(loop.states) + 1
    chain = bounded_chain_partial(loop, s0, n_stable)

    def where(n=None):
        return lambda: f"body={_show_loop(loop)}, s0={s0!r}" + ("" if n is None else f", n={n}")

    for n, v in enumerate(chain):
        report.check("bounded-below-full", pleq(v, full), True, where(n))
    for n in range(n_stable):
        report.check("chain-monotone", pleq(chain[n], chain[n + 1]), True, where(n))
    report.check("stabilization", chain[n_stable], full, where(n_stable))
    return report


def _show_loop(loop) -> str:
    return "{" + ", ".join(f"{s!r}: {loop.table[s]!r}" for s in loop.states) + "}"


# -- collapse of delay machines --------------------------------------------


@dataclass(frozen=True)
class Determined:
    result: Any


@dataclass(frozen=True)
class Unknown:
    residual: D.Delay


ThreeValuedResult = Determined | Unknown


@dataclass(frozen=True)
class QuotientRep:
    """A machine, optionally with a set covering every reachable state."""

    underlying: D.Delay
    certificate: frozenset | None = None


def collapse_fuel(d: D.Delay, fuel: int = D.DEFAULT_FUEL) -> ThreeValuedResult:
    """``Determined(Value x)`` if ``d`` returns within ``fuel`` steps, else
    ``Unknown``; never ``Determined(Bottom)``."""
    obs = D.run_for(d, fuel)
    if isinstance(obs, D.Converged):
        return Determined(Value(obs.value))
    return Unknown(obs.residual)


def certify(d: D.Delay, max_states: int | None = None) -> QuotientRep:
    """Explore ``d`` until it returns or repeats a state; the visited states
    form the certificate."""
    limit = instance_budget() if max_states is None else max_states
    visited = set()
    s = d.seed
    while s not in visited:
        if len(visited) >= limit:
            raise InvalidCertificate(f"more than {limit} reachable states")
        visited.add(s)
        r = d.step(s)
        if isinstance(r, Left):
            break
        s = r.value
    return QuotientRep(d, frozenset(visited))


def collapse_finite(q: QuotientRep | D.Delay, certificate: Iterable | None = None):
    """Exact collapse of a finite-state machine.

    ``Value x`` if the machine returns ``x``; Bottom once a state repeats.
    A bare Delay is certified on the fly when no certificate is given.
    """
    if isinstance(q, D.Delay):
        q = QuotientRep(q, frozenset(certificate)) if certificate is not None else certify(q)
    if q.certificate is None:
        raise InvalidCertificate("no finite-state certificate")
    d, cert = q.underlying, q.certificate
    visited = set()
    s = d.seed
    while True:
        if s not in cert:
            raise InvalidCertificate(f"reachable state {s!r} is not in the certificate")
        if s in visited:
            return BOTTOM
        visited.add(s)
        r = d.step(s)
        if isinstance(r, Left):
            return Value(r.value)
        s = r.value


def all_machines(max_states: int, values: Iterable) -> Iterator[tuple[dict, int]]:
    """Every table machine on states ``0..k-1`` (``1 <= k <= max_states``)
    over the given exit values, paired with every seed."""
    values = tuple(values)
    for k in range(1, max_states + 1):
        moves = [Left(v) for v in values] + [Right(s) for s in range(k)]
        for table in itertools.product(moves, repeat=k):
            t = dict(enumerate(table))
            for seed in range(k):
                yield t, seed


# -- law suites ------------------------------------------------------------


def _sets(n: int, lo: int = 0):
    return [FinSet(tuple(range(k))) for k in range(lo, n + 1)]


def check_restriction_axioms(max_size: int = 2, extended_size: int = 3,
                             dom_fn: Callable[[FinKleisli], FinKleisli] = dom) -> LawReport:
    """RST1-RST4, the sum law for ``dom`` and ``(K eta) f = (K f)(dom f)``.

    All four axioms run over every triple of tables at sizes up to
    ``max_size``; RST1 and RST3 additionally up to ``extended_size``.
    """
    report = LawReport("restriction")
    small = _sets(max_size)
    for X in small:
        for Y in small:
            fs = list(all_kleisli(X, Y))
            for f in fs:
                report.check("RST1", compose(f, dom_fn(f)), f, lambda: f"f={f!r}")
            for Z in small:
                gs = list(all_kleisli(X, Z))
                hs = list(all_kleisli(Y, Z))
                for f in fs:
                    df = dom_fn(f)
                    for g in gs:
                        dg = dom_fn(g)
                        report.check("RST2", compose(df, dg), compose(dg, df), lambda: f"f={f!r}, g={g!r}")
                        report.check("RST3", dom_fn(compose(g, df)), compose(dg, df), lambda: f"f={f!r}, g={g!r}")
                    for h in hs:
                        report.check("RST4", compose(dom_fn(h), f), compose(f, dom_fn(compose(h, f))),
                                     lambda: f"f={f!r}, h={h!r}")
    # dom of a copairing
    for X in small:
        for Y in small:
            for Z in small:
                for f in all_kleisli(X, Z):
                    for g in all_kleisli(Y, Z):
                        lhs = dom_fn(copair(f, g))
                        rhs = copair(kmap(Left, dom_fn(f)), kmap(Right, dom_fn(g)))
                        report.check("dom-copair", lhs.table, rhs.table, lambda: f"f={f!r}, g={g!r}")
    for X in small:
        for Y in small:
            for f in all_kleisli(X, Y):
                lhs = kmap(eta, f)
                rhs = kmap(lambda x: f(x), dom_fn(f))
                report.check("K-eta-dom", lhs.table, rhs.table, lambda: f"f={f!r}")
    if extended_size > max_size:
        big = _sets(extended_size, 1)
        for X in big:
            if len(X) <= max_size:
                continue
            for Y in big:
                fs = list(all_kleisli(X, Y))
                for f in fs:
                    report.check("RST1", compose(f, dom_fn(f)), f, lambda: f"f={f!r}")
                for Z in big:
                    gs = list(all_kleisli(X, Z))
                    for f in fs:
                        df = dom_fn(f)
                        for g in gs:
                            report.check("RST3", dom_fn(compose(g, df)), compose(dom_fn(g), df),
                                         lambda: f"f={f!r}, g={g!r}")
    return report


def check_equational_lifting(max_size: int = 3) -> LawReport:
    """``τ Δ = K<η, id>``, commutativity, copyability and weak discardability."""
    report = LawReport("equational-lifting")
    sets = _sets(max_size)
    for X in sets:
        for d in partial_carrier(X):
            report.check("tau-diagonal", strength(d, d), pmap(d, lambda x: (Value(x), x)), lambda: f"d={d!r}")
            report.check("copyable", sequence_pair(d, d), pmap(d, lambda x: (x, x)), lambda: f"d={d!r}")
        for Y in sets:
            for a in partial_carrier(X):
                for b in partial_carrier(Y):
                    report.check("commutative", sequence_pair(a, b), sequence_pair_swapped(a, b),
                                 lambda: f"a={a!r}, b={b!r}")
    for X in sets:
        for Y in sets:
            fs = list(all_kleisli(X, Y))
            for Z in sets:
                for f in fs:
                    for g in all_kleisli(X, Z):
                        lhs = FinKleisli(X, tuple(pmap(sequence_pair(p, q), lambda pair: pair[0])
                                                  for p, q in zip(f.table, g.table)), Y)
                        report.check("weakly-discardable", leq(lhs, f), True, lambda: f"f={f!r}, g={g!r}")
    return report


def check_enrichment(max_size: int = 2) -> LawReport:
    """Composition is strict and monotone; strength preserves ⊥ and ⊑."""
    report = LawReport("enrichment")
    sets = _sets(max_size)
    for X in sets:
        for Y in sets:
            fs = list(all_kleisli(X, Y))
            for Z in sets:
                gs = list(all_kleisli(Y, Z))
                bot_yz = bottom_map(Y, Z)
                for f in fs:
                    report.check("strict-left", compose(bot_yz, f).table, bottom_map(X, Z).table,
                                 lambda: f"f={f!r}")
                for g in gs:
                    report.check("strict-right", compose(g, bottom_map(X, Y)).table, bottom_map(X, Z).table,
                                 lambda: f"g={g!r}")
                for f in fs:
                    for f2 in fs:
                        if not leq(f, f2):
                            continue
                        for g in gs:
                            report.check("monotone-right", leq(compose(g, f), compose(g, f2)), True,
                                         lambda: f"f={f!r}, f'={f2!r}, g={g!r}")
                for g in gs:
                    for g2 in gs:
                        if not leq(g, g2):
                            continue
                        for f in fs:
                            report.check("monotone-left", leq(compose(g, f), compose(g2, f)), True,
                                         lambda: f"f={f!r}, g={g!r}, g'={g2!r}")
            # strength: τ (id × f) over W × X
            for W in sets:
                WX = product(W, X)
                report.check("strength-bottom",
                             tuple(strength(w, BOTTOM) for w, _ in WX), (BOTTOM,) * len(WX),
                             lambda: f"|W|={len(W)}, |X|={len(X)}")
                for f in fs:
                    for f2 in fs:
                        if not leq(f, f2):
                            continue
                        lhs = FinKleisli(WX, tuple(strength(w, f(x)) for w, x in WX))
                        rhs = FinKleisli(WX, tuple(strength(w, f2(x)) for w, x in WX))
                        report.check("strength-monotone", leq(lhs, rhs), True,
                                     lambda: f"W={W!r}, f={f!r}, f'={f2!r}")
    return report


def _partial_loops(S: FinSet, values: FinSet) -> Iterator[tuple[list[int], list]]:
    """All loop bodies ``S -> K(values) + S`` as kernel codes."""
    carrier = list(partial_carrier(values))
    n, m = len(S), len(carrier)
    for code in itertools.product(range(-m, n), repeat=n):
        yield list(code), carrier


def _loop_from_code(S: FinSet, code, payloads):
    from .algebra import LoopBody

    return LoopBody(S, {s: (Left(payloads[-c - 1]) if c < 0 else Right(S.elements[c]))
                        for s, c in zip(S, code)})


def check_pre_elgot(max_size: int = 2) -> LawReport:
    """``h* f† = ((h* + id) f)†`` and iteration-preservation of strength."""
    report = LawReport("pre-elgot")
    sets = _sets(max_size, 1)
    for S in sets:
        for X in _sets(max_size):
            for code, carrier in _partial_loops(S, X):
                loop = _loop_from_code(S, code, carrier)
                f_dag = {s: iterate_partial(loop, s) for s in S}
                for Y in _sets(max_size):
                    for h in all_kleisli(X, Y):
                        lifted = type(loop)(S, {s: (Left(bind(e.value, h)) if isinstance(e, Left) else e)
                                                for s, e in loop.table.items()})
                        for s in S:
                            report.check("pre-elgot", bind(f_dag[s], h), iterate_partial(lifted, s),
                                         lambda: f"f={_show_loop(loop)}, h={h!r}, s={s!r}")
                for W in _sets(max_size):
                    # τ (id × f†) = ((τ + id) dstr (id × f))† over W × S
                    WS = product(W, S)
                    body = {}
                    for w, s in WS:
                        e = dstr(w, loop.table[s])
                        body[(w, s)] = Left(strength(*e.value)) if isinstance(e, Left) else Right(e.value)
                    lifted = type(loop)(WS, body)
                    for w, s in WS:
                        report.check("strength-iteration", strength(w, f_dag[s]), iterate_partial(lifted, (w, s)),
                                     lambda: f"f={_show_loop(loop)}, w={w!r}, s={s!r}")
    return report


def check_least_prefixpoint(max_states: int = 2, max_values: int = 2) -> LawReport:
    """Iteration lies below every pre-fixpoint ``g`` of ``[id, g] . f ⊑ g``."""
    report = LawReport("least-prefixpoint")
    for S in _sets(max_states, 1):
        for X in _sets(max_values):
            carrier = list(partial_carrier(X))
            candidates = list(itertools.product(carrier, repeat=len(S)))
            for code, payloads in _partial_loops(S, X):
                loop = _loop_from_code(S, code, payloads)
                fixed = tuple(iterate_partial(loop, s) for s in S)
                for g in candidates:
                    gmap = dict(zip(S, g))
                    unfolded = tuple(e.value if isinstance(e, Left) else gmap[e.value]
                                     for e in (loop.table[s] for s in S))
                    if not all(pleq(u, v) for u, v in zip(unfolded, g)):
                        continue
                    report.check("least-prefixpoint", all(pleq(a, b) for a, b in zip(fixed, g)), True,
                                 lambda: f"f={_show_loop(loop)}, g={g!r}")
    return report


def check_collapse(max_states: int = 4, values=(0, 1)) -> LawReport:
    """Exact collapse on every table machine with at most ``max_states``
    states: agreement with the oracle iteration, invariance under ``later``,
    and the monad-morphism equations for ``now`` and ``bind``."""
    from .finset import oracle_iterate

    report = LawReport("collapse")
    values = tuple(values)
    conts = {}
    for v in values:
        # a few fixed continuations: return, delay then return, diverge
        conts[v] = [D.now(("k", v)), D.iota(("k", v), 2), D.never()]
    for table, seed in all_machines(max_states, values):
        d = D.finite_machine(table, seed)
        where = lambda: f"table={table}, seed={seed}"
        c = collapse_finite(d)
        oracle = oracle_iterate({s: (Left(Value(e.value)) if isinstance(e, Left) else e) for s, e in table.items()},
                                seed)
        report.check("oracle", c, oracle, where)
        report.check("later", collapse_finite(D.later(d)), c, where)
        for choice in range(3):
            f = lambda v, choice=choice: conts[v][choice]
            rhs = bind(c, lambda v: collapse_finite(f(v)))
            report.check("bind", collapse_finite(D.bind(d, f)), rhs, lambda: f"{where()}, k={choice}")
    for v in values:
        report.check("now", collapse_finite(D.now(v)), Value(v), f"v={v!r}")
    return report
