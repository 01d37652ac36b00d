"""Command-line entry point: ``elgot-iter run|trace|collapse|laws``.

Exit codes: 0 on success, 1 on a law failure, a program error or a collapse
disagreement, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import TextIO

from . import delay as D
from .finset import SizeLimit, instance_budget
from .partial import BOTTOM, Value

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _pos_int(text: str) -> int:
    n = _nonneg_int(text)
    if n == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    parser = argparse.ArgumentParser(prog="elgot-iter",
                                     description="Delay machines, Elgot iteration and a small while-language.")
    sub = parser.add_subparsers(dest="command", required=True)

    def program_args(p, backend=True):
        p.add_argument("program", help="path to a .whl program ('-' reads stdin)")
        p.add_argument("--fuel", type=_nonneg_int, default=D.DEFAULT_FUEL, help="step bound (default %(default)s)")
        p.add_argument("--set", dest="assignments", action="append", default=[], metavar="VAR=VAL",
                       help="initial value of a variable (repeatable)")
        p.add_argument("--output", choices=("text", "json"), default="text")
        if backend:
            p.add_argument("--backend", choices=("intensional", "extensional"), default="extensional")

    run = sub.add_parser("run", help="evaluate a program")
    program_args(run)

    tr = sub.add_parser("trace", help="show the first machine steps of a program")
    program_args(tr, backend=False)
    tr.add_argument("--detect-cycles", action="store_true", help="stop with DIVERGES on a repeated state")

    col = sub.add_parser("collapse", help="compare the intensional and extensional semantics")
    program_args(col, backend=False)

    laws = sub.add_parser("laws", help="run law suites")
    laws.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"], metavar="NAME",
                      help="suite to run (repeatable; default all). One of: " + ", ".join(sorted(SUITES)))
    laws.add_argument("--max-size", type=_pos_int, default=None, help="main size cap of each selected suite")
    laws.add_argument("--output", choices=("text", "json"), default="text")
    laws.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    laws.add_argument("--deterministic", action="store_true", help="omit timings from JSON output")
    laws.add_argument("--list", action="store_true", help="list suites and exit")
    return parser


def _load_program(path: str):
    from .lang import parse

    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _initial_store(program, assignments):
    from .lang import Store, parse_assignments

    return Store.initial(program, parse_assignments(assignments))


def _emit_json(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _cmd_run(args, out: TextIO) -> int:
    from .lang import eval_extensional, eval_intensional

    program = _load_program(args.program)
    s0 = _initial_store(program, args.assignments)
    result: dict = {"backend": args.backend}
    if args.backend == "extensional":
        r = eval_extensional(program, s0)
        if isinstance(r, Value):
            result.update(status="converged", store=r.value.as_dict())
        else:
            result.update(status="diverges")
    else:
        obs = D.run_for(eval_intensional(program, s0), args.fuel)
        if isinstance(obs, D.Converged):
            result.update(status="converged", store=obs.value.as_dict(), steps=obs.steps)
        else:
            result.update(status="unknown", fuel=args.fuel)
    if args.output == "json":
        _emit_json(result, out)
    elif result["status"] == "converged":
        for name, value in result["store"].items():
            out.write(f"{name} = {value}\n")
        if "steps" in result:
            out.write(f"({result['steps']} steps)\n")
    elif result["status"] == "diverges":
        out.write("DIVERGES\n")
    else:
        out.write(f"UNKNOWN after {args.fuel} steps\n")
    return EXIT_OK


def _cmd_trace(args, out: TextIO) -> int:
    from .lang import TraceConverged, TraceDiverged, trace

    program = _load_program(args.program)
    t = trace(program, _initial_store(program, args.assignments), args.fuel, detect_cycles=args.detect_cycles)
    if args.output == "text":
        out.write(t.render() + "\n")
        return EXIT_OK
    status = ("converged" if isinstance(t.status, TraceConverged)
              else "diverged" if isinstance(t.status, TraceDiverged) else "fuel-exhausted")
    entries = [{"step": e.step, "line": e.loc[0] if e.loc else None, "col": e.loc[1] if e.loc else None,
                "kind": e.kind, "taken": e.taken, "store": e.store.as_dict()} for e in t.entries]
    doc = {"entries": entries, "status": status}
    if isinstance(t.status, TraceConverged):
        doc["store"] = t.status.store.as_dict()
    _emit_json(doc, out)
    return EXIT_OK


def _show_partial(p) -> str:
    return "DIVERGES" if p is BOTTOM else str(p.value)


def _cmd_collapse(args, out: TextIO) -> int:
    from .lang import collapse_program, eval_extensional

    program = _load_program(args.program)
    s0 = _initial_store(program, args.assignments)
    ext = eval_extensional(program, s0)
    col = collapse_program(program, s0)
    agree = ext == col
    if args.output == "json":
        def enc(p):
            return None if p is BOTTOM else p.value.as_dict()

        _emit_json({"agree": agree, "extensional": enc(ext), "collapsed": enc(col)}, out)
    else:
        out.write(("AGREE" if agree else "DISAGREE") + "\n")
        out.write(f"extensional: {_show_partial(ext)}\n")
        out.write(f"collapsed:   {_show_partial(col)}\n")
    return EXIT_OK if agree else EXIT_FAIL


def _cmd_laws(args, out: TextIO) -> int:
    from .suites import SUITES, run_suite

    if args.list:
        for name in sorted(SUITES):
            out.write(f"{name:<20} {SUITES[name].description}\n")
        return EXIT_OK
    names = args.suite or ["all"]
    if "all" in names:
        names = list(SUITES)
    reports = [run_suite(name, args.max_size, args.seed) for name in dict.fromkeys(names)]
    if args.output == "json":
        docs = [r.to_json(deterministic=args.deterministic) for r in reports]
        _emit_json(docs[0] if len(docs) == 1 else docs, out)
    else:
        for r in reports:
            out.write(r.summary() + "\n")
            for f in r.failures[:10]:
                out.write(f"  {f.law}: {f.instance}\n    lhs = {f.lhs}\n    rhs = {f.rhs}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS = {"run": _cmd_run, "trace": _cmd_trace, "collapse": _cmd_collapse, "laws": _cmd_laws}


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    from .lang import ProgramError

    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        instance_budget()
        return COMMANDS[args.command](args, out)
    except ProgramError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL
    except (UsageError, SizeLimit, ValueError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
