"""Finite-set plumbing: carriers, sums, products, function spaces.

Also houses :func:`oracle_iterate`, a deliberately naive second
implementation of loop iteration used to cross-check the library's
iteration operators. It shares no code with :mod:`elgot_iter.partial`
or :mod:`elgot_iter.algebra`.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "ELGOT_ITER_BUDGET"


class SizeLimit(Exception):
    """An enumeration would exceed the configured instance budget."""

    def __init__(self, count, cap, region=""):
        self.count = count
        self.cap = cap
        self.region = region
        msg = f"{count} instances exceed the budget of {cap}"
        if region:
            msg += f" ({region})"
        super().__init__(msg)


class UnknownState(KeyError):
    """A start state lies outside the declared state set."""


def instance_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    value = int(raw)
    if value < 0:
        raise ValueError(f"{BUDGET_ENV} must be non-negative, got {value}")
    return value


# -- binary sums -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Left:
    value: Any

    def __repr__(self):
        return f"Left({self.value!r})"


@dataclass(frozen=True, slots=True)
class Right:
    value: Any

    def __repr__(self):
        return f"Right({self.value!r})"


def either(on_left: Callable, on_right: Callable) -> Callable:
    """Copairing ``[on_left, on_right]``."""

    def case(e):
        if isinstance(e, Left):
            return on_left(e.value)
        return on_right(e.value)

    return case


def sum_map(f: Callable, g: Callable) -> Callable:
    """``f + g``."""
    return either(lambda a: Left(f(a)), lambda b: Right(g(b)))


def dstr(x, e):
    """X x (Y + Z) -> X x Y + X x Z."""
    if isinstance(e, Left):
        return Left((x, e.value))
    return Right((x, e.value))


def dstr_inv(e):
    x, v = e.value
    return (x, Left(v)) if isinstance(e, Left) else (x, Right(v))


def dstl(e, z):
    """(X + Y) x Z -> X x Z + Y x Z."""
    if isinstance(e, Left):
        return Left((e.value, z))
    return Right((e.value, z))


def dstl_inv(e):
    v, z = e.value
    return (Left(v), z) if isinstance(e, Left) else (Right(v), z)


# -- finite sets -----------------------------------------------------------


@dataclass(frozen=True)
class FinSet:
    """A finite set with a fixed enumeration order."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if len(set(elements)) != len(elements):
            raise ValueError(f"duplicate elements in {elements!r}")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(elements)})

    @classmethod
    def range(cls, n: int) -> "FinSet":
        return cls(tuple(range(n)))

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        try:
            return x in self._index
        except TypeError:
            return False

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownState(x) from None

    def __repr__(self):
        return f"FinSet({list(self.elements)!r})"


EMPTY = FinSet(())
UNIT = FinSet(((),))


def coproduct(xs: FinSet, ys: FinSet) -> FinSet:
    return FinSet(tuple(Left(x) for x in xs) + tuple(Right(y) for y in ys))


def product(xs: FinSet, ys: FinSet) -> FinSet:
    return FinSet(tuple((x, y) for x in xs for y in ys))


# -- function spaces -------------------------------------------------------


@dataclass(frozen=True)
class FunSpace:
    """All total tables ``domain -> codomain``.

    A table is a tuple aligned with ``domain.elements``; iteration order is
    lexicographic in the codomain order, so the enumeration is deterministic
    and every cursor obtained from ``iter()`` is independent.
    """

    domain: FinSet
    codomain: FinSet

    @property
    def count(self) -> int:
        return len(self.codomain) ** len(self.domain)

    def __len__(self):
        return self.count

    def __iter__(self) -> Iterator[tuple]:
        return itertools.product(self.codomain.elements, repeat=len(self.domain))

    def as_mapping(self, table: tuple) -> dict:
        return dict(zip(self.domain.elements, table))


def enumerate_functions(domain: FinSet, codomain: FinSet, cap: int | None = None) -> Iterator[tuple]:
    """Stream every table ``domain -> codomain`` (|codomain|^|domain| of them).

    Raises SizeLimit up front if the count exceeds ``cap`` (default: the
    global instance budget).
    """
    space = FunSpace(domain, codomain)
    limit = instance_budget() if cap is None else cap
    if space.count > limit:
        raise SizeLimit(space.count, limit, f"|dom|={len(domain)}, |cod|={len(codomain)}")
    return iter(space)


def check_budget(count: int, region: str = "", cap: int | None = None) -> None:
    limit = instance_budget() if cap is None else cap
    if count > limit:
        raise SizeLimit(count, limit, region)


# -- brute-force oracle ----------------------------------------------------


def oracle_iterate(body: Mapping[Hashable, Any] | Any, s0):
    """Follow ``Right`` edges from ``s0`` until an exit or a repeat.

    ``body`` maps states to ``Left(payload)`` / ``Right(state)``; anything
    with ``states`` and ``table`` attributes (a LoopBody) is accepted too.
    Returns the first ``Left`` payload, or ``Bottom`` when a state repeats.
    """
    from .partial import BOTTOM

    table = _as_table(body)
    if s0 not in table:
        raise UnknownState(s0)
    path = []
    state = s0
    while True:
        for seen in path:
            if seen == state:
                return BOTTOM
        path.append(state)
        step = table[state]
        if isinstance(step, Left):
            return step.value
        state = step.value
        if state not in table:
            raise UnknownState(state)


def _as_table(body) -> Mapping:
    if hasattr(body, "states") and hasattr(body, "table"):
        return body.table
    return body


def preimages(h: tuple, size: int) -> list[list[int]]:
    """For a table h: range(len(h)) -> range(size), list each point's preimage."""
    pre = [[] for _ in range(size)]
    for x, y in enumerate(h):
        pre[y].append(x)
    return pre


def tables(domain_size: int, codomain_size: int) -> Iterable[tuple[int, ...]]:
    """Index-level tables ``range(domain_size) -> range(codomain_size)``."""
    return itertools.product(range(codomain_size), repeat=domain_size)
