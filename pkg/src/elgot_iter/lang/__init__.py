"""A small while-language with delay-machine and partiality semantics."""

from .generator import corpus, generate_program
from .semantics import (
    END,
    Store,
    Trace,
    TraceConverged,
    TraceDiverged,
    TraceEntry,
    TraceFuelExhausted,
    collapse_program,
    compile_program,
    eval_expr,
    eval_extensional,
    eval_extensional_counted,
    eval_intensional,
    parse_assignments,
    state_bound,
    trace,
    unroll_first,
    unroll_offset,
)
from .syntax import (
    Program,
    ProgramError,
    UndeclaredVariable,
    WhileSyntaxError,
    WhileTypeError,
    parse,
    pretty,
    tokenize,
)

__all__ = [
    "END",
    "Program",
    "ProgramError",
    "Store",
    "Trace",
    "TraceConverged",
    "TraceDiverged",
    "TraceEntry",
    "TraceFuelExhausted",
    "UndeclaredVariable",
    "WhileSyntaxError",
    "WhileTypeError",
    "collapse_program",
    "compile_program",
    "corpus",
    "eval_expr",
    "eval_extensional",
    "eval_extensional_counted",
    "eval_intensional",
    "generate_program",
    "parse",
    "parse_assignments",
    "pretty",
    "state_bound",
    "tokenize",
    "trace",
    "unroll_first",
    "unroll_offset",
]
