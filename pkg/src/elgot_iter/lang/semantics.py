"""Intensional and extensional semantics of the while-language.

Step convention for the intensional machine: one step per executed
assignment, per ``skip`` and per guard test of ``if``/``while``. Sequencing
and jumps cost nothing, so the machine runs over flattened instructions
whose successors are resolved at compile time. Its state is
``(pc, store)``; ``pc == END`` returns the store.

The extensional semantics is a denotational interpreter: statements denote
maps ``Store -> Partial(Store)`` and ``while`` is the least-fixpoint Elgot
iteration over stores. It shares no code with the machine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .. import delay as D
from ..elgot import elgot_iterate_fn
from ..finset import Left, Right
from ..partial import BOTTOM, Value, bind, collapse_finite
from .syntax import (
    Assign,
    BinOp,
    Bool,
    If,
    Num,
    Program,
    ProgramError,
    Skip,
    UnOp,
    Var,
    UndeclaredVariable,
    While,
    WhileSyntaxError,
)

END = -1


@dataclass(frozen=True)
class Store:
    """Values of the declared variables, each modulo ``2**width``."""

    names: tuple
    widths: tuple
    values: tuple

    @classmethod
    def initial(cls, program: Program, overrides: Mapping[str, int] | None = None) -> "Store":
        names = tuple(d.name for d in program.decls)
        widths = tuple(d.width for d in program.decls)
        store = cls(names, widths, (0,) * len(names))
        for name, v in (overrides or {}).items():
            if name not in names:
                raise UndeclaredVariable(name)
            store = store.set(name, v)
        return store

    def __getitem__(self, name: str) -> int:
        return self.values[self.names.index(name)]

    def set(self, name: str, value: int) -> "Store":
        i = self.names.index(name)
        values = list(self.values)
        values[i] = value % (1 << self.widths[i])
        return Store(self.names, self.widths, tuple(values))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.values))

    def size(self) -> int:
        """Number of stores over these declarations."""
        n = 1
        for w in self.widths:
            n <<= w
        return n

    def __str__(self):
        return ", ".join(f"{n} = {v}" for n, v in zip(self.names, self.values))


def eval_expr(e, store: Store):
    """Exact integer / boolean value; wrapping happens only on assignment."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Bool):
        return e.value
    if isinstance(e, Var):
        return store[e.name]
    if isinstance(e, UnOp):
        v = eval_expr(e.arg, store)
        return -v if e.op == "-" else not v
    if e.op == "and":
        return eval_expr(e.left, store) and eval_expr(e.right, store)
    if e.op == "or":
        return eval_expr(e.left, store) or eval_expr(e.right, store)
    a = eval_expr(e.left, store)
    b = eval_expr(e.right, store)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "<":
        return a < b
    if e.op == "<=":
        return a <= b
    return a == b


# -- compilation to flat instructions -------------------------------------


@dataclass(frozen=True)
class Instr:
    kind: str  # "assign", "skip", "guard"
    loc: tuple | None
    var: str | None = None
    expr: object = None
    next: int = END
    orelse: int = END


@dataclass
class Code:
    instrs: list = field(default_factory=list)
    entry: int = END

    @property
    def control_points(self) -> int:
        return len(self.instrs) + 1


def compile_program(program: Program) -> Code:
    code = Code()

    def emit(instr) -> int:
        code.instrs.append(instr)
        return len(code.instrs) - 1

    def block(stmts, nxt: int) -> int:
        for s in reversed(stmts):
            nxt = one(s, nxt)
        return nxt

    def one(s, nxt: int) -> int:
        if isinstance(s, Skip):
            return emit(Instr("skip", s.loc, next=nxt))
        if isinstance(s, Assign):
            return emit(Instr("assign", s.loc, var=s.var, expr=s.expr, next=nxt))
        if isinstance(s, If):
            t = block(s.then, nxt)
            f = block(s.orelse, nxt)
            return emit(Instr("guard", s.loc, expr=s.cond, next=t, orelse=f))
        pc = emit(None)
        body = block(s.body, pc)
        code.instrs[pc] = Instr("guard", s.loc, expr=s.cond, next=body, orelse=nxt)
        return pc

    code.entry = block(program.body, END)
    return code


def _execute(instr: Instr, store: Store) -> tuple[int, Store, bool | None]:
    if instr.kind == "assign":
        return instr.next, store.set(instr.var, eval_expr(instr.expr, store)), None
    if instr.kind == "skip":
        return instr.next, store, None
    taken = bool(eval_expr(instr.expr, store))
    return (instr.next if taken else instr.orelse), store, taken


class _MachineStep:
    __slots__ = ("instrs",)

    def __init__(self, code: Code):
        self.instrs = tuple(code.instrs)

    def __call__(self, state):
        pc, store = state
        if pc == END:
            return Left(store)
        nxt, store, _ = _execute(self.instrs[pc], store)
        return Right((nxt, store))


def _check_store(program: Program, s0: Store) -> None:
    if s0.names != tuple(d.name for d in program.decls) or s0.widths != tuple(d.width for d in program.decls):
        raise ProgramError("store does not match the program's declarations")


def eval_intensional(program: Program, s0: Store | None = None) -> D.Delay:
    """Delay machine over ``(pc, store)``; one step per executed statement or guard test."""
    s0 = Store.initial(program) if s0 is None else s0
    _check_store(program, s0)
    code = compile_program(program)
    return D.Delay((code.entry, s0), _MachineStep(code))


def state_bound(program: Program) -> int:
    """Control points times stores: the machine cannot run longer without repeating a state."""
    return compile_program(program).control_points * Store.initial(program).size()


# -- extensional (denotational) semantics -----------------------------------


@dataclass
class _Counter:
    visits: int = 0

    def __call__(self, _state):
        self.visits += 1


def _denote_block(stmts, store: Store, counter: _Counter):
    result = Value(store)
    for s in stmts:
        result = bind(result, lambda st, s=s: _denote(s, st, counter))
        if result is BOTTOM:
            return BOTTOM
    return result


def _denote(s, store: Store, counter: _Counter):
    if isinstance(s, Skip):
        return Value(store)
    if isinstance(s, Assign):
        return Value(store.set(s.var, eval_expr(s.expr, store)))
    if isinstance(s, If):
        branch = s.then if eval_expr(s.cond, store) else s.orelse
        return _denote_block(branch, store, counter)

    def body(st: Store):
        if not eval_expr(s.cond, st):
            return Value(Left(st))
        return bind(_denote_block(s.body, st, counter), lambda st2: Value(Right(st2)))

    return elgot_iterate_fn(body, store, on_visit=counter)


def eval_extensional(program: Program, s0: Store | None = None):
    """``Value(final store)`` or Bottom, decided by cycle detection."""
    return eval_extensional_counted(program, s0)[0]


def eval_extensional_counted(program: Program, s0: Store | None = None):
    """Like :func:`eval_extensional`, also returning how many loop-body
    states were visited."""
    s0 = Store.initial(program) if s0 is None else s0
    _check_store(program, s0)
    counter = _Counter()
    return _denote_block(program.body, s0, counter), counter.visits


def collapse_program(program: Program, s0: Store | None = None):
    """Exact collapse of the intensional machine."""
    return collapse_finite(eval_intensional(program, s0))


# -- traces ----------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    step: int
    loc: tuple | None
    kind: str
    store: Store
    taken: bool | None = None


@dataclass(frozen=True)
class TraceConverged:
    store: Store


@dataclass(frozen=True)
class TraceDiverged:
    pass


@dataclass(frozen=True)
class TraceFuelExhausted:
    pass


@dataclass(frozen=True)
class Trace:
    entries: tuple
    status: TraceConverged | TraceDiverged | TraceFuelExhausted

    def render(self) -> str:
        lines = []
        for e in self.entries:
            where = f"{e.loc[0]}:{e.loc[1]}" if e.loc else "?"
            extra = "" if e.taken is None else f" -> {'true' if e.taken else 'false'}"
            lines.append(f"{e.step:>5}  {where:<7} {e.kind}{extra}  [{e.store}]")
        if isinstance(self.status, TraceConverged):
            lines.append(f"converged after {len(self.entries)} steps: {self.status.store}")
        elif isinstance(self.status, TraceDiverged):
            lines.append(f"diverges: state repeats after {len(self.entries)} steps")
        else:
            lines.append(f"fuel exhausted after {len(self.entries)} steps")
        return "\n".join(lines)


def trace(program: Program, s0: Store | None = None, fuel: int = D.DEFAULT_FUEL,
          detect_cycles: bool = False) -> Trace:
    """The first ``min(fuel, total)`` machine steps with store snapshots.

    With ``detect_cycles`` a repeated ``(pc, store)`` ends the trace as
    Diverged instead of running out the fuel.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    s0 = Store.initial(program) if s0 is None else s0
    _check_store(program, s0)
    code = compile_program(program)
    pc, store = code.entry, s0
    entries = []
    seen = set()
    while len(entries) < fuel and pc != END:
        if detect_cycles:
            if (pc, store) in seen:
                return Trace(tuple(entries), TraceDiverged())
            seen.add((pc, store))
        instr = code.instrs[pc]
        pc, store, taken = _execute(instr, store)
        entries.append(TraceEntry(len(entries), instr.loc, instr.kind, store, taken))
    if pc == END:
        return Trace(tuple(entries), TraceConverged(store))
    if detect_cycles and (pc, store) in seen:
        return Trace(tuple(entries), TraceDiverged())
    return Trace(tuple(entries), TraceFuelExhausted())


# -- loop unrolling --------------------------------------------------------


def unroll_first(program: Program) -> tuple[Program, tuple | None]:
    """Replace the first ``while`` not nested in another loop by
    ``if e then b; while e do b od else skip fi``.

    Returns the new program and the location of the unrolled loop (None if
    there is none). Intensionally the unrolled program takes exactly one
    more step when that loop's guard is false on entry (the ``skip``), and
    the same number otherwise.
    """
    done = []

    def block(stmts):
        return tuple(one(s) for s in stmts)

    def one(s):
        if done:
            return s
        if isinstance(s, While):
            done.append(s.loc)
            return If(s.cond, s.body + (s,), (Skip(s.loc),), s.loc)
        if isinstance(s, If):
            return If(s.cond, block(s.then), block(s.orelse), s.loc)
        return s

    new = Program(program.decls, block(program.body))
    return new, (done[0] if done else None)


def unroll_offset(program: Program, loc, s0: Store | None = None, fuel: int | None = None) -> int | None:
    """Expected extra steps of :func:`unroll_first`: 1 if the loop at
    ``loc`` is reached with a false guard, else 0. None if the program does
    not finish within ``fuel`` steps."""
    s0 = Store.initial(program) if s0 is None else s0
    fuel = state_bound(program) if fuel is None else fuel
    t = trace(program, s0, fuel)
    if not isinstance(t.status, TraceConverged):
        return None
    for e in t.entries:
        if e.kind == "guard" and e.loc == loc:
            return 0 if e.taken else 1
    return 0


def parse_assignments(items: Iterable[str]) -> dict[str, int]:
    """``["x=3", "y=-1"]`` -> ``{"x": 3, "y": -1}``."""
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise WhileSyntaxError(f"expected var=value, got {item!r}")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise WhileSyntaxError(f"not an integer: {value!r}") from None
    return out
