"""Uniform-iteration algebras on finite carriers and their law checkers.

An :class:`IterAlgebra` turns a loop body ``S -> A + S`` and a start state
into an element of its carrier ``A``. The law suites enumerate every body
over small state sets as integer codes (see :mod:`elgot_iter.kernels`):
state ``s`` maps to ``code[s] >= 0`` (loop back to that state) or to
``code[s] < 0`` (exit with carrier element ``-code[s] - 1``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from . import delay as D
from .finset import (
    FinSet,
    FunSpace,
    Left,
    Right,
    UnknownState,
    check_budget,
    dstr,
    preimages,
    product,
)
from .kernels import DIVERGE, exit_code, iterate_all
from .partial import (
    BOTTOM,
    InvalidCertificate,
    bind,
    certify,
    collapse_finite,
    mu,
    partial_carrier,
)
from .report import LawReport, timed

__all__ = [
    "FinSet",
    "IterAlgebra",
    "LawReport",
    "LoopBody",
    "NotSearchAlgebra",
    "UnknownState",
    "check_bottom_preservation",
    "check_delay_laws_bounded",
    "check_elgot_laws",
    "check_loop_splitting",
    "check_maybe_elgot_laws",
    "check_search_algebra",
    "delay_algebra",
    "exponential_algebra",
    "iter_to_search_algebra",
    "iterate",
    "maybe_algebra",
    "maybe_search_algebra",
    "product_algebra",
    "search_algebra_to_iter",
]


class NotSearchAlgebra(ValueError):
    pass


@dataclass(frozen=True)
class LoopBody:
    """A total table ``states -> Left(exit) | Right(next state)``."""

    states: FinSet
    table: Mapping

    def __post_init__(self):
        if len(self.table) != len(self.states) or any(s not in self.table for s in self.states):
            raise ValueError("body must be defined on exactly the declared states")
        for s in self.states:
            step = self.table[s]
            if isinstance(step, Right):
                if step.value not in self.states:
                    raise UnknownState(step.value)
            elif not isinstance(step, Left):
                raise TypeError(f"body({s!r}) = {step!r} is neither Left nor Right")

    @classmethod
    def from_function(cls, states: FinSet, fn: Callable) -> "LoopBody":
        return cls(states, {s: fn(s) for s in states})

    def __call__(self, s):
        try:
            return self.table[s]
        except KeyError:
            raise UnknownState(s) from None

    def map_exits(self, g: Callable) -> "LoopBody":
        """``(g + id) . body``."""
        return LoopBody(self.states, {s: (Left(g(e.value)) if isinstance(e, Left) else e)
                                      for s, e in self.table.items()})

    def __repr__(self):
        return "LoopBody{" + ", ".join(f"{s!r}: {self.table[s]!r}" for s in self.states) + "}"


class IterAlgebra:
    """A carrier with an iteration operator.

    ``solve_codes`` is an optional fast path: given an integer-coded body over
    states ``0..n-1`` whose exits are carrier indices, return the carrier
    index of the iterate from every start.
    """

    def __init__(self, carrier: FinSet, iterate_fn: Callable[[LoopBody, Any], Any] | None = None,
                 solve_codes: Callable[[list], list] | None = None, name: str = "algebra"):
        if iterate_fn is None and solve_codes is None:
            raise ValueError("need iterate_fn or solve_codes")
        self.carrier = carrier
        self.name = name
        self._iterate_fn = iterate_fn
        self._solve_codes = solve_codes

    @classmethod
    def from_function(cls, carrier: FinSet, fn: Callable[[LoopBody, Any], Any], name: str = "custom"):
        return cls(carrier, iterate_fn=fn, name=name)

    def __repr__(self):
        return f"IterAlgebra({self.name}, |A|={len(self.carrier)})"

    def iterate(self, loop: LoopBody, s0):
        if s0 not in loop.states:
            raise UnknownState(s0)
        if self._iterate_fn is not None:
            return self._iterate_fn(loop, s0)
        code = []
        for s in loop.states:
            e = loop.table[s]
            code.append(exit_code(self.carrier.index(e.value)) if isinstance(e, Left)
                        else loop.states.index(e.value))
        return self.carrier.elements[self._solve_codes(code)[loop.states.index(s0)]]

    def solve(self, code) -> list[int]:
        if self._solve_codes is not None:
            return self._solve_codes(code)
        states = FinSet(tuple(range(len(code))))
        elems = self.carrier.elements
        loop = LoopBody(states, {s: (Left(elems[-c - 1]) if c < 0 else Right(c)) for s, c in enumerate(code)})
        return [self.carrier.index(self._iterate_fn(loop, s)) for s in states]

    @property
    def bottom(self):
        """The divergence constant: iterate of ``inr`` on a one-state loop."""
        return self.iterate(LoopBody(FinSet(((),)), {(): Right(())}), ())


def iterate(alg: IterAlgebra, loop: LoopBody, s0):
    return alg.iterate(loop, s0)


# -- concrete algebras -----------------------------------------------------


def _maybe_solve(code):
    # carrier index 0 is Bottom, so a divergent start maps there too
    return [0 if r == DIVERGE else r for r in iterate_all(code)]


def maybe_algebra(values: FinSet | int) -> IterAlgebra:
    """The free algebra ``K X`` on the maybe backend; Bottom is carrier index 0."""
    if isinstance(values, int):
        values = FinSet(tuple(range(values)))
    return IterAlgebra(partial_carrier(values), solve_codes=_maybe_solve, name=f"K{len(values)}")


def product_algebra(alg_a: IterAlgebra, alg_b: IterAlgebra) -> IterAlgebra:
    """Componentwise: ``<((fst+id)h)†, ((snd+id)h)†>``."""
    carrier = product(alg_a.carrier, alg_b.carrier)

    def it(loop: LoopBody, s0):
        return (alg_a.iterate(loop.map_exits(lambda p: p[0]), s0),
                alg_b.iterate(loop.map_exits(lambda p: p[1]), s0))

    return IterAlgebra(carrier, iterate_fn=it, name=f"({alg_a.name} x {alg_b.name})")


def exponential_algebra(alg: IterAlgebra, exponent: FinSet) -> IterAlgebra:
    """Tables ``exponent -> A`` (tuples aligned with ``exponent``), iterated pointwise."""
    carrier = FinSet(tuple(FunSpace(exponent, alg.carrier)))

    def it(loop: LoopBody, s0):
        return tuple(alg.iterate(loop.map_exits(lambda t, i=i: t[i]), s0) for i in range(len(exponent)))

    return IterAlgebra(carrier, iterate_fn=it, name=f"{alg.name}^{len(exponent)}")


def _delay_iterate(loop: LoopBody, s0):
    return D.mu(D.coit(loop, s0))


def delay_algebra(carrier: FinSet) -> IterAlgebra:
    """Iteration on a finite set of delay machines: ``mu . coit(body)``.

    Every loop-back costs one step, so the laws only hold up to weak
    bisimilarity.
    """
    return IterAlgebra(carrier, iterate_fn=_delay_iterate, name="D")


# -- search-algebras -------------------------------------------------------


def maybe_search_algebra(d: D.Delay):
    """``D(KX) -> KX``: exact collapse, flattened."""
    return mu(collapse_finite(d))


def _probe_machines(carrier: FinSet) -> list[D.Delay]:
    probes = []
    for x in carrier:
        probes.extend([D.now(x), D.iota(x, 2)])
    probes.append(D.finite_machine({0: Right(1), 1: Right(0)}, 0))
    return probes


def search_algebra_to_iter(a: Callable[[D.Delay], Any], carrier: FinSet, name: str = "search",
                           probes: list[D.Delay] | None = None) -> IterAlgebra:
    """``body† (s0) = a(coit(body, s0))``.

    Raises :class:`NotSearchAlgebra` when ``a . now = id`` or ``a . later = a``
    fails on a probe.
    """
    for x in carrier:
        if a(D.now(x)) != x:
            raise NotSearchAlgebra(f"a(now({x!r})) = {a(D.now(x))!r}")
    for d in probes if probes is not None else _probe_machines(carrier):
        if a(D.later(d)) != a(d):
            raise NotSearchAlgebra(f"a(later d) != a(d) for d = {d!r}")

    def it(loop: LoopBody, s0):
        return a(D.coit(loop, s0))

    return IterAlgebra(carrier, iterate_fn=it, name=name)


def iter_to_search_algebra(alg: IterAlgebra, max_states: int | None = None) -> Callable[[D.Delay], Any]:
    """``out†`` restricted to machines with finitely many reachable states."""

    def a(d: D.Delay):
        cert = certify(d, max_states)
        states = FinSet(tuple(sorted(cert.certificate, key=repr)))
        try:
            loop = LoopBody.from_function(states, d.step)
        except UnknownState as exc:
            raise InvalidCertificate(str(exc)) from None
        return alg.iterate(loop, d.seed)

    return a


# -- law suites ------------------------------------------------------------


def _bodies(n: int, m: int):
    """Every code over ``n`` states exiting into ``m`` carrier elements."""
    return itertools.product(range(-m, n), repeat=n)


def _show(code, alg: IterAlgebra) -> str:
    elems = alg.carrier.elements
    return "{" + ", ".join(f"{s}: {'Left(' + repr(elems[-c - 1]) + ')' if c < 0 else f'Right({c})'}"
                           for s, c in enumerate(code)) + "}"


def check_elgot_laws(alg: IterAlgebra, max_states: int = 3, laws=None, report: LawReport | None = None) -> LawReport:
    """Fixpoint, Uniformity, Folding and Compositionality over every body
    with at most ``max_states`` states exiting into the carrier."""
    laws = set(laws or ("fixpoint", "uniformity", "folding", "compositionality"))
    report = report if report is not None else LawReport(f"elgot-algebra[{alg.name}]")
    m = len(alg.carrier)
    elems = alg.carrier.elements
    sizes = range(1, max_states + 1)
    for n in sizes:
        check_budget((m + n) ** n, f"bodies with |S|={n}")

    if "fixpoint" in laws:
        for n in sizes:
            for code in _bodies(n, m):
                sol = alg.solve(code)
                for s, c in enumerate(code):
                    rhs = -c - 1 if c < 0 else sol[c]
                    report.check("Fixpoint", elems[sol[s]], elems[rhs],
                                 lambda: f"body={_show(code, alg)}, s0={s}")

    if "uniformity" in laws:
        # (id+h) f = g h: f is rebuilt from g and h; state-choices range over preimages
        for n1 in sizes:
            for n2 in sizes:
                for g in _bodies(n2, m):
                    gsol = alg.solve(g)
                    for h in itertools.product(range(n2), repeat=n1):
                        pre = preimages(h, n2)
                        choices = []
                        for s in range(n1):
                            gc = g[h[s]]
                            choices.append((gc,) if gc < 0 else pre[gc])
                        if any(not c for c in choices):
                            continue
                        for f in itertools.product(*choices):
                            fsol = alg.solve(f)
                            for s in range(n1):
                                report.check("Uniformity", elems[fsol[s]], elems[gsol[h[s]]],
                                             lambda: f"f={_show(f, alg)}, g={_show(g, alg)}, h={h}, s0={s}")

    if "folding" in laws or "compositionality" in laws:
        for nx in sizes:
            for ny in sizes:
                hs = list(itertools.product(range(nx + ny), repeat=ny))
                for f in _bodies(nx, m):
                    fsol = alg.solve(f)
                    for h in hs:
                        if "folding" in laws:
                            # (f† + h)† = [(id+inl) f, inr h]† on X + Y
                            lhs = alg.solve([exit_code(fsol[x]) for x in range(nx)] + list(h))
                            rhs = alg.solve(list(f) + list(h))
                            for s in range(nx + ny):
                                report.check("Folding", elems[lhs[s]], elems[rhs[s]],
                                             lambda: f"f={_show(f, alg)}, h={h}, s0={s}")
                        if "compositionality" in laws:
                            # ((f†+id) h)† = ([(id+inl) f, inr inr] [inl, h])† inr
                            lhs = alg.solve([exit_code(fsol[t]) if t < nx else t - nx for t in h])
                            rhs = alg.solve(list(f) + [f[t] if t < nx else t for t in h])
                            for y in range(ny):
                                report.check("Compositionality", elems[lhs[y]], elems[rhs[nx + y]],
                                             lambda: f"f={_show(f, alg)}, h={h}, y={y}")
    return report


def check_maybe_elgot_laws(max_states: int = 3, max_values: int = 2) -> LawReport:
    report = LawReport("elgot-algebra")
    with timed(report):
        for a in range(max_values + 1):
            check_elgot_laws(maybe_algebra(a), max_states, report=report)
    return report


def check_loop_splitting(max_states: int = 2, max_values: int = 1, max_target: int = 2) -> LawReport:
    """``((h+id) f)† = ((h+id) dstr (id × (snd+id) f))† <((fst+id) f)†, id>``
    for K-algebras ``A, B, C``, every ``f: Z -> A×B + Z`` and every ``h: A×B -> C``."""
    report = LawReport("loop-splitting")
    algs = [maybe_algebra(k) for k in range(max_values + 1)]
    targets = [maybe_algebra(k) for k in range(max_target + 1)]
    for A, B, C in itertools.product(algs, algs, targets):
        AB = product(A.carrier, B.carrier)
        hs = list(itertools.product(C.carrier.elements, repeat=len(AB)))
        for nz in range(1, max_states + 1):
            Z = FinSet(tuple(range(nz)))
            AZ = product(A.carrier, Z)
            for fcode in _bodies(nz, len(AB)):
                f = LoopBody(Z, {z: (Left(AB.elements[-c - 1]) if c < 0 else Right(c))
                                 for z, c in zip(Z, fcode)})
                first = {z: A.iterate(f.map_exits(lambda p: p[0]), z) for z in Z}
                for h in hs:
                    hmap = dict(zip(AB.elements, h))
                    lhs_loop = f.map_exits(hmap.__getitem__)
                    split = {}
                    for a, z in AZ:
                        e = dstr(a, f.map_exits(lambda p: p[1])(z))
                        split[(a, z)] = Left(hmap[e.value]) if isinstance(e, Left) else e
                    rhs_loop = LoopBody(AZ, split)
                    for z in Z:
                        report.check("loop-splitting", C.iterate(lhs_loop, z), C.iterate(rhs_loop, (first[z], z)),
                                     lambda: f"f={f!r}, h={h}, z={z}")
    return report


def check_bottom_preservation(max_values: int = 2) -> LawReport:
    """Product projections and Kleisli lifts send the divergence constant to
    the divergence constant."""
    report = LawReport("bottom-preservation")
    algs = [maybe_algebra(k) for k in range(max_values + 1)]
    for A in algs:
        for B in algs:
            P = product_algebra(A, B)
            report.check("fst-bottom", P.bottom[0], A.bottom, lambda: f"{A.name} x {B.name}")
            report.check("snd-bottom", P.bottom[1], B.bottom, lambda: f"{A.name} x {B.name}")
            values = [p.value for p in A.carrier if p is not BOTTOM]
            for table in itertools.product(B.carrier.elements, repeat=len(values)):
                h = dict(zip(values, table))
                report.check("kleisli-bottom", bind(A.bottom, h.__getitem__), B.bottom,
                             lambda: f"h={h}")
    return report


def check_delay_laws_bounded(max_states: int = 2, fuel: int = 50) -> LawReport:
    """Fixpoint and Folding on ``delay_algebra`` up to weak bisimilarity.

    Machines are ``iota(x, k)`` for a few ``x, k``; the report is not exact.
    """
    report = LawReport("elgot-algebra[D]")
    report.exact = False
    carrier = FinSet(tuple(D.iota(x, k) for x in (0, 1) for k in (0, 2)))
    alg = delay_algebra(carrier)

    def weq(d1, d2):
        return D.bisim_weak_fuel(d1, d2, fuel) is not D.ThreeValued.FALSE

    elems = carrier.elements
    for n in range(1, max_states + 1):
        states = FinSet(tuple(range(n)))
        for code in _bodies(n, len(carrier)):
            loop = LoopBody(states, {s: (Left(elems[-c - 1]) if c < 0 else Right(c)) for s, c in enumerate(code)})
            for s, c in enumerate(code):
                rhs = elems[-c - 1] if c < 0 else alg.iterate(loop, c)
                report.check("Fixpoint", alg.iterate(loop, s), rhs, lambda: f"body={loop!r}, s0={s}", eq=weq)
    return report


def check_search_algebra(max_states: int = 3, max_machine_states: int = 4, max_values: int = 2) -> LawReport:
    """Search-algebra / iteration correspondence on the maybe backend.

    The iteration recovered from exact collapse agrees with cycle detection
    on every body, and both round trips are identities on every body and
    every table machine up to the given sizes.
    """
    from .partial import all_machines

    report = LawReport("search-algebra")
    with timed(report):
        for a_size in range(max_values + 1):
            alg = maybe_algebra(a_size)
            recovered = search_algebra_to_iter(maybe_search_algebra, alg.carrier)
            back = search_algebra_to_iter(iter_to_search_algebra(alg), alg.carrier)
            for n in range(1, max_states + 1):
                for code in _bodies(n, len(alg.carrier)):
                    expected = alg.solve(code)
                    report.check("recovered-iterate", recovered.solve(code), expected,
                                 lambda: f"body={_show(code, alg)}")
                    report.check("iter-roundtrip", back.solve(code), expected, lambda: f"body={_show(code, alg)}")
            a2 = iter_to_search_algebra(recovered)
            for table, seed in all_machines(max_machine_states, alg.carrier.elements):
                d = D.finite_machine(table, seed)
                report.check("algebra-roundtrip", a2(d), maybe_search_algebra(d), lambda: f"table={table}, seed={seed}")
    return report
