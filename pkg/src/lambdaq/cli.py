"""Command-line runner and REPL.

    lambdaq run [--level l|p|q] [--mode eval|observe|dist|sample] [--seed N]
                [--samples N] [--fuel N] [--trace] (--expr TEXT | SOURCE)
    lambdaq repl [--level ...] [--seed N] [--fuel N]

Exit status: 0 success, 1 parse or evaluation error, 2 unobservable term.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO

from .evaluation import EvalConfig, EvalError, evaluate, evaluate_small_step
from .observe import ObservationFailure, Rng, exact_distribution, sample_many, theta_sample, xi_sample
from .prelude import PRELUDE, describe
from .rewrite import trace_line
from .syntax import Env, Level, ParseError, parse_program, print_term
from .terms import Term, mk_collection
from .numerals import IDENTITY

__all__ = ["RunRequest", "Repl", "main", "run"]

MODES = ("eval", "observe", "dist", "sample")


@dataclass(frozen=True)
class RunRequest:
    source: str
    level: Level = Level.Q
    mode: str = "observe"
    seed: Optional[int] = None
    samples: int = 1000
    fuel: int = 1_000_000
    trace: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "level", Level.coerce(self.level))
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")


def _labelled(t: Term) -> str:
    label = describe(t)
    text = print_term(t)
    return text if label is None or label == text else f"{text}    # {label}"


def _value(term: Term, cfg: EvalConfig, trace: bool, out: TextIO) -> Term:
    if not trace:
        return evaluate(term, cfg)
    return evaluate_small_step(term, cfg, lambda rule, path, t: print(trace_line(rule, path, t), file=out))


def _observe(value: Term, level: Level, rng: Rng) -> Term:
    if level is Level.LAMBDA:
        return value
    if level is Level.P:
        return theta_sample(value, rng)
    return xi_sample(value, rng)


def _frequency_table(counts: Counter, n: int) -> list[str]:
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].key))
    return [f"{c}/{n} {_labelled(t)}" for t, c in rows]


def execute(term: Term, req: RunRequest, out: TextIO) -> None:
    """Run ``term`` under ``req``, writing results to ``out``.  Errors propagate."""
    cfg = EvalConfig(fuel=req.fuel, level=req.level)
    value = _value(term, cfg, req.trace, out)
    if req.mode == "eval":
        print(_labelled(value), file=out)
    elif req.mode == "dist":
        if req.level is Level.LAMBDA:
            print(f"1/1 {print_term(value)}", file=out)
        else:
            out.write(exact_distribution(value).serialize())
    elif req.mode == "observe":
        rng = Rng(req.seed)
        print(f"seed: {rng.seed}", file=out)
        print(_labelled(_observe(value, req.level, rng)), file=out)
    else:
        rng = Rng(req.seed)
        print(f"seed: {rng.seed}", file=out)
        if req.level is Level.LAMBDA:
            counts = Counter({value: req.samples})
        else:
            counts = sample_many(value, req.samples, rng.seed, req.level)
        for line in _frequency_table(counts, req.samples):
            print(line, file=out)


def _read_source(source: str) -> str:
    path = Path(source)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return source


def run(req: RunRequest, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    """Parse, evaluate and report; returns the exit status."""
    try:
        program = parse_program(_read_source(req.source), req.level)
        term = program.resolved_main()
        if term is None:
            raise ParseError("no term to run", 1, 1, {"term"})
        execute(term, req, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return 1
    except EvalError as exc:
        print(f"evaluation error: {exc}", file=err)
        return 1
    except ObservationFailure as exc:
        print(f"{exc}", file=err)
        return 2
    return 0


# -- REPL -------------------------------------------------------------------

HELP = """\
  <term>              evaluate and print the value
  let NAME = <term>   add a definition
  :obs <term>         evaluate and observe once
  :dist <term>        exact observation distribution
  :sample N <term>    observe N times, print frequencies
  :trace on|off       print reduction steps
  :guard on|off       add I to observed collections so they never cancel out
  :seed N             reseed
  :fuel N             set the beta-step budget
  :level [l|p|q]      show or set the calculus level
  :load FILE          read definitions from a file
  :quit               leave"""


class Repl:
    """Line-oriented session state: definitions plus settings."""

    def __init__(self, level: Level | str = Level.Q, seed: Optional[int] = None, fuel: int = 1_000_000):
        self.level = Level.coerce(level)
        self.fuel = fuel
        self.trace = False
        self.guard = False
        self.env: Env = PRELUDE.copy()
        self.rng = Rng(seed)
        self.done = False

    def _term(self, text: str) -> Term:
        program = parse_program(text, self.level, base=self.env)
        if program.main is None or program.definitions:
            raise ParseError("expected a single term", 1, 1, {"term"})
        return program.resolved_main()

    def _value(self, text: str, out: TextIO) -> Term:
        value = _value(self._term(text), EvalConfig(self.fuel, self.level), self.trace, out)
        return mk_collection([IDENTITY, value]) if self.guard and self.level is not Level.LAMBDA else value

    def handle(self, line: str, out: TextIO) -> None:
        line = line.strip()
        if not line or line.startswith("#"):
            return
        try:
            self._dispatch(line, out)
        except (ParseError, EvalError, NameError, ValueError, OSError) as exc:
            print(f"error: {exc}", file=out)
        except ObservationFailure as exc:
            print(f"{exc}", file=out)

    def _dispatch(self, line: str, out: TextIO) -> None:
        if line.startswith("let "):
            program = parse_program(line, self.level, base=self.env)
            if program.main is not None:
                raise ParseError("trailing term after definition", 1, 1, {";"})
            self.env = program.env
            for name, _ in program.definitions:
                print(f"defined {name}", file=out)
            return
        if not line.startswith(":"):
            print(_labelled(self._value(line, out)), file=out)
            return
        cmd, _, rest = line.partition(" ")
        rest = rest.strip()
        if cmd in (":quit", ":q"):
            self.done = True
        elif cmd == ":help":
            print(HELP, file=out)
        elif cmd == ":obs":
            print(_labelled(_observe(self._value(rest, out), self.level, self.rng)), file=out)
        elif cmd == ":dist":
            value = self._value(rest, out)
            out.write(exact_distribution(value).serialize() if self.level is not Level.LAMBDA else f"1/1 {value}\n")
        elif cmd == ":sample":
            count, _, text = rest.partition(" ")
            n = int(count)
            if n < 1:
                raise ValueError("sample count must be positive")
            value = self._value(text, out)
            seed = self.rng.uniform_below(2**63)
            counts = Counter({value: n}) if self.level is Level.LAMBDA else sample_many(value, n, seed, self.level)
            print(f"seed: {seed}", file=out)
            for row in _frequency_table(counts, n):
                print(row, file=out)
        elif cmd in (":trace", ":guard"):
            if rest not in ("on", "off"):
                raise ValueError(f"{cmd} takes on or off")
            setattr(self, cmd[1:], rest == "on")
        elif cmd == ":seed":
            self.rng = Rng(int(rest)) if rest else self.rng
            print(f"seed: {self.rng.seed}", file=out)
        elif cmd == ":fuel":
            if rest:
                self.fuel = EvalConfig(int(rest), self.level).fuel
            print(f"fuel: {self.fuel}", file=out)
        elif cmd == ":level":
            if rest:
                self.level = Level.coerce(rest)
            print(f"level: {self.level.value}", file=out)
        elif cmd == ":load":
            program = parse_program(Path(rest).read_text(encoding="utf-8"), self.level, base=self.env)
            self.env = program.env
            print(f"loaded {len(program.definitions)} definitions", file=out)
            if program.main is not None:
                print(_labelled(_value(program.resolved_main(), EvalConfig(self.fuel, self.level), self.trace, out)), file=out)
        else:
            raise ValueError(f"unknown directive {cmd} (try :help)")

    def loop(self, inp: TextIO = sys.stdin, out: TextIO = sys.stdout) -> None:
        interactive = inp.isatty()
        print(f"level {self.level.value}, seed {self.rng.seed}; :help for commands", file=out)
        while not self.done:
            if interactive:
                out.write(f"{self.level.value}> ")
                out.flush()
            line = inp.readline()
            if not line:
                break
            self.handle(line, out)


# -- entry point ------------------------------------------------------------


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambdaq", description="Randomized and quantumized lambda calculus.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", choices=[lv.value for lv in Level], default="q")
    common.add_argument("--seed", type=_u64)
    common.add_argument("--fuel", type=_positive, default=1_000_000)

    run_p = sub.add_parser("run", parents=[common], help="evaluate a program")
    run_p.add_argument("--mode", choices=MODES, default="observe")
    run_p.add_argument("--samples", type=_positive, default=1000)
    run_p.add_argument("--trace", action="store_true")
    src = run_p.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="program text")
    src.add_argument("source", nargs="?", help="program file (or inline text)")

    sub.add_parser("repl", parents=[common], help="interactive session")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "repl":
        Repl(args.level, args.seed, args.fuel).loop()
        return 0
    req = RunRequest(
        source=args.expr if args.expr is not None else args.source,
        level=args.level,
        mode=args.mode,
        seed=args.seed,
        samples=args.samples,
        fuel=args.fuel,
        trace=args.trace,
    )
    return run(req)


if __name__ == "__main__":
    sys.exit(main())
