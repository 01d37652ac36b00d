"""Seeded random programs for cross-checking the two semantics.

Programs have at most three variables of width at most four and statement
nesting at most four deep, so every store space is tiny. Generated ASTs are
printed and re-parsed, so every node carries a real source location.
"""

from __future__ import annotations

import random

from .syntax import Assign, BinOp, Decl, If, Num, Program, Skip, Var, While, parse, pretty

MAX_DEPTH = 4
MAX_VARS = 3
MAX_WIDTH = 4


def _int_expr(rng: random.Random, names, depth: int):
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.6:
            return Var(rng.choice(names))
        return Num(rng.randrange(0, 4))
    op = rng.choice(["+", "+", "-", "*"])
    return BinOp(op, _int_expr(rng, names, depth - 1), _int_expr(rng, names, depth - 1))


def _guard(rng: random.Random, names):
    cmp = BinOp(rng.choice(["<", "<=", "="]), Var(rng.choice(names)), _int_expr(rng, names, 1))
    r = rng.random()
    if r < 0.15:
        other = BinOp(rng.choice(["<", "="]), Var(rng.choice(names)), Num(rng.randrange(0, 8)))
        return BinOp(rng.choice(["and", "or"]), cmp, other)
    return cmp


def _stmt(rng: random.Random, names, depth: int):
    r = rng.random()
    if depth >= MAX_DEPTH or r < 0.45:
        if rng.random() < 0.1:
            return Skip()
        return Assign(rng.choice(names), _int_expr(rng, names, 2))
    if r < 0.7:
        return If(_guard(rng, names), _block(rng, names, depth + 1), _block(rng, names, depth + 1))
    return While(_guard(rng, names), _block(rng, names, depth + 1))


def _block(rng: random.Random, names, depth: int):
    return tuple(_stmt(rng, names, depth) for _ in range(rng.randint(1, 3)))


def generate_program(seed: int | random.Random) -> Program:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    nvars = rng.randint(1, MAX_VARS)
    names = [f"v{i}" for i in range(nvars)]
    decls = tuple(Decl(n, rng.randint(1, MAX_WIDTH)) for n in names)
    # statement depth counts the top level as 1
    body = tuple(_stmt(rng, names, 1) for _ in range(rng.randint(1, 4)))
    return parse(pretty(Program(decls, body)))


def corpus(n: int, seed: int = 0) -> list[Program]:
    rng = random.Random(seed)
    return [generate_program(rng) for _ in range(n)]
