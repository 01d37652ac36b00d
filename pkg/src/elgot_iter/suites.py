"""Named law suites, shared by the command line and the acceptance tests.

Every suite is a function ``size -> LawReport``; ``size`` is the main size
cap of that suite and ``None`` means its default.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from . import algebra, delay, elgot, partial
from .finset import FinSet, FunSpace, Left, Right, check_budget, oracle_iterate
from .report import LawReport, timed


def kleene_suite(max_states: int = 4, max_values: int = 2) -> LawReport:
    """Bounded iteration over every Partial loop body with ``|S| <= max_states``,
    plus leastness among pre-fixpoints at size 2."""
    report = LawReport("kleene")
    with timed(report):
        for n in range(1, max_states + 1):
            S = FinSet(tuple(range(n)))
            for m in range(max_values + 1):
                carrier = partial.partial_carrier(range(m)).elements
                for code in itertools.product(range(-len(carrier), n), repeat=n):
                    loop = algebra.LoopBody(S, {s: (Left(carrier[-c - 1]) if c < 0 else Right(c))
                                                for s, c in enumerate(code)})
                    for s in S:
                        partial.kleene_check(loop, s, report)
        report.merge(partial.check_least_prefixpoint(2, 2))
        report.merge(elgot.check_bounded_elgot(min(max_states, 3), max_values))
    return report


def oracle_suite(max_states: int = 3, max_values: int = 2) -> LawReport:
    """Brute-force oracle vs kernel iteration vs Elgot iteration after rearrangement."""
    report = elgot.check_rearrangement(max_states, max_values)
    report.suite = "oracle"
    return report


def finset_suite(max_size: int = 3) -> LawReport:
    """Function spaces have ``|B|^|A|`` members, enumerated without repeats
    in a stable order; the oracle matches a hand-rolled path walk."""
    report = LawReport("finset")
    for a in range(max_size + 1):
        for b in range(max_size + 1):
            A, B = FinSet(tuple(range(a))), FinSet(tuple(range(b)))
            fs = list(FunSpace(A, B))
            report.check("count", len(fs), b ** a, f"|A|={a}, |B|={b}")
            report.check("distinct", len(set(fs)), len(fs), f"|A|={a}, |B|={b}")
            report.check("stable", list(FunSpace(A, B)), fs, f"|A|={a}, |B|={b}")
    for n in range(1, max_size + 1):
        for table in itertools.product(range(-2, n), repeat=n):
            body = {s: (Left(partial.Value(-c)) if c < 0 else Right(c)) for s, c in enumerate(table)}
            for s0 in range(n):
                seen, s = [], s0
                while s not in seen and table[s] >= 0:
                    seen.append(s)
                    s = table[s]
                expected = partial.Value(-table[s]) if table[s] < 0 else partial.BOTTOM
                report.check("oracle-walk", oracle_iterate(body, s0), expected,
                             f"table={table}, s0={s0}")
    return report


def language_suite(n_programs: int = 100, seed: int = 0) -> LawReport:
    """Both semantics agree on the generated corpus; divergence is found
    within the state bound; one loop unrolling preserves meaning."""
    from . import lang

    report = LawReport("language")
    with timed(report):
        for k, program in enumerate(lang.corpus(n_programs, seed)):
            where = lambda: f"program {k} (seed {seed}):\n{lang.pretty(program)}"
            ext = lang.eval_extensional(program)
            report.check("agreement", lang.collapse_program(program), ext, where)
            bound = lang.state_bound(program)
            obs = delay.run_for(lang.eval_intensional(program), bound)
            if isinstance(obs, delay.StillRunning):
                report.check("divergence-bound", ext, partial.BOTTOM, where)
            else:
                report.check("divergence-bound", ext, partial.Value(obs.value), where)
            unrolled, loc = lang.unroll_first(program)
            if loc is None:
                continue
            report.check("unroll-extensional", lang.eval_extensional(unrolled), ext, where)
            if ext is partial.BOTTOM:
                continue
            o1 = delay.run_for(lang.eval_intensional(program), bound)
            o2 = delay.run_for(lang.eval_intensional(unrolled), lang.state_bound(unrolled))
            report.check("unroll-value", o2.value, o1.value, where)
            report.check("unroll-offset", o2.steps - o1.steps, lang.unroll_offset(program, loc), where)
    return report


@dataclass(frozen=True)
class Suite:
    name: str
    fn: Callable[..., LawReport]
    description: str
    estimate: Callable[[int], int]
    default_size: int
    seeded: bool = False

    def run(self, size: int | None = None, seed: int = 0) -> LawReport:
        size = self.default_size if size is None else size
        check_budget(self.estimate(size), f"suite {self.name} at size {size}")
        return self.fn(size, seed=seed) if self.seeded else self.fn(size)


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("elgot-algebra", algebra.check_maybe_elgot_laws,
              "Fixpoint, Uniformity, Folding, Compositionality on the maybe backend",
              lambda n: (3 + n) ** n * (2 * n) ** n, 3),
        Suite("loop-splitting", algebra.check_loop_splitting, "splitting a loop over a product carrier",
              lambda n: (4 + n) ** n * 81, 2),
        Suite("bottom-preservation", algebra.check_bottom_preservation,
              "projections and Kleisli lifts preserve divergence", lambda n: (n + 1) ** (n + 1), 2),
        Suite("search-algebra", algebra.check_search_algebra, "search-algebra correspondence",
              lambda n: (3 + n) ** n, 3),
        Suite("restriction", partial.check_restriction_axioms, "restriction axioms",
              lambda n: ((n + 1) ** n) ** 3, 2),
        Suite("equational-lifting", partial.check_equational_lifting, "equational lifting",
              lambda n: ((n + 1) ** n) ** 2, 3),
        Suite("enrichment", partial.check_enrichment, "strictness and monotonicity",
              lambda n: ((n + 1) ** n) ** 3, 2),
        Suite("pre-elgot", partial.check_pre_elgot, "Kleisli lifts and strength preserve iteration",
              lambda n: (n + 2) ** n * (n + 1) ** n, 2),
        Suite("elgot-monad", elgot.check_elgot_monad_axioms, "Elgot monad axioms",
              lambda n: (2 * n + 1) ** n * n ** n, 2),
        Suite("kleene", kleene_suite, "bounded iteration and leastness", lambda n: (3 + n) ** n, 4),
        Suite("oracle", oracle_suite, "oracle agreement", lambda n: (3 + n) ** n, 3),
        Suite("finset", finset_suite, "finite sets and the brute-force oracle", lambda n: (n + 2) ** n, 3),
        Suite("sigma", elgot.check_sigma_laws, "Σ lattice and frame laws (size is the fuel)", lambda n: 1, 50),
        Suite("delay", delay.check_delay_laws, "delay monad laws (size is the number of machines)",
              lambda n: n, 200, seeded=True),
        Suite("delay-algebra", algebra.check_delay_laws_bounded,
              "iteration on delay machines up to weak bisimilarity", lambda n: (4 + n) ** n, 2),
        Suite("collapse", partial.check_collapse, "collapse coherence on finite machines",
              lambda n: (2 + n) ** n * n, 4),
        Suite("language", language_suite, "while-language semantics (size is the corpus size)",
              lambda n: n, 100, seeded=True),
    ]
}


def run_suite(name: str, size: int | None = None, seed: int = 0) -> LawReport:
    suite = SUITES[name]
    report = LawReport(name)
    with timed(report):
        report.merge(suite.run(size, seed))
    return report
