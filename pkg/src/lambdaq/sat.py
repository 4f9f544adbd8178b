"""Satisfiability by cancellation.

``CHECK_f`` is applied to the collection of all truth assignments, giving one
T/F per assignment.  REMOVE-F turns every F into a cancelling pair, and a
distinguished ``I`` is added so the collection never cancels to nothing::

    (I, REMOVE-F (CHECK_f ASSIGN_k))

Observing T proves ``f`` satisfiable; observing I is inconclusive.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .evaluation import EvalConfig, evaluate
from .observe import Distribution, Rng, exact_distribution, xi_sample
from .numerals import FALSE, IDENTITY, TRUE
from .prelude import PRELUDE
from .syntax import Level, parse
from .terms import App, Term, members, mk_collection

__all__ = [
    "And",
    "BoolFormula",
    "Not",
    "Or",
    "Prop",
    "SatVerdict",
    "assignments",
    "build_check",
    "check_outputs",
    "enumerate_formulas",
    "pipeline",
    "pipeline_distribution",
    "sat_observe",
    "truth_table",
]


class BoolFormula:
    """Propositional formula over v1..vk."""

    def max_var(self) -> int:
        raise NotImplementedError

    def holds(self, values: tuple[bool, ...]) -> bool:
        raise NotImplementedError

    def source(self) -> str:
        """Term syntax for the body of CHECK, with the assignment bound to ``a``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Prop(BoolFormula):
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("variables are numbered from 1")

    def max_var(self) -> int:
        return self.index

    def holds(self, values):
        return values[self.index - 1]

    def source(self) -> str:
        arg = "a"
        for _ in range(self.index - 1):
            arg = f"(SND {arg})"
        return f"(FST {arg})"

    def __str__(self) -> str:
        return f"v{self.index}"


@dataclass(frozen=True)
class Not(BoolFormula):
    operand: BoolFormula

    def max_var(self) -> int:
        return self.operand.max_var()

    def holds(self, values):
        return not self.operand.holds(values)

    def source(self) -> str:
        return f"(NOT {self.operand.source()})"

    def __str__(self) -> str:
        return f"!{self.operand}"


@dataclass(frozen=True)
class And(BoolFormula):
    left: BoolFormula
    right: BoolFormula

    def max_var(self) -> int:
        return max(self.left.max_var(), self.right.max_var())

    def holds(self, values):
        return self.left.holds(values) and self.right.holds(values)

    def source(self) -> str:
        return f"(AND {self.left.source()} {self.right.source()})"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(BoolFormula):
    left: BoolFormula
    right: BoolFormula

    def max_var(self) -> int:
        return max(self.left.max_var(), self.right.max_var())

    def holds(self, values):
        return self.left.holds(values) or self.right.holds(values)

    def source(self) -> str:
        return f"(OR {self.left.source()} {self.right.source()})"

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


class SatVerdict(enum.Enum):
    SATISFIABLE = "satisfiable"
    INCONCLUSIVE = "inconclusive"


def _arity(f: BoolFormula, k: Optional[int]) -> int:
    k = f.max_var() if k is None else k
    if f.max_var() > k:
        raise ValueError(f"variable v{f.max_var()} out of range for k={k}")
    if not 1 <= k <= 20:
        raise ValueError("k must be between 1 and 20")
    return k


def truth_table(f: BoolFormula, k: Optional[int] = None) -> list[bool]:
    """Values of ``f`` over all assignments, v1-major, T before F."""
    k = _arity(f, k)
    return [f.holds(vals) for vals in itertools.product((True, False), repeat=k)]


def build_check(f: BoolFormula, k: Optional[int] = None) -> Term:
    """``\\a. f(FST a, FST (SND a), ...)`` as a closed term."""
    _arity(f, k)
    return PRELUDE.resolve(parse(f"\\a.{f.source()}", Level.LAMBDA))


def assignments(k: int) -> Term:
    """``PAIR (T, F) (PAIR (T, F) (... I))``: all k-tuples once gamma-expanded."""
    t = IDENTITY
    pair = PRELUDE["PAIR"]
    for _ in range(k):
        t = App(App(pair, mk_collection([TRUE, FALSE])), t)
    return t


def pipeline(f: BoolFormula, k: Optional[int] = None) -> Term:
    k = _arity(f, k)
    checked = App(PRELUDE["REMOVE-F"], App(build_check(f, k), assignments(k)))
    return mk_collection([IDENTITY, checked])


def check_outputs(f: BoolFormula, cfg: EvalConfig = EvalConfig(level=Level.P), k: Optional[int] = None) -> list[Term]:
    """Evaluated members of ``CHECK_f ASSIGN_k``, one per assignment."""
    k = _arity(f, k)
    return list(members(evaluate(App(build_check(f, k), assignments(k)), cfg)))


def pipeline_distribution(f: BoolFormula, cfg: EvalConfig = EvalConfig(), k: Optional[int] = None) -> Distribution:
    return exact_distribution(evaluate(pipeline(f, k), cfg))


def sat_observe(
    f: BoolFormula,
    cfg: EvalConfig = EvalConfig(),
    rng: Optional[Rng] = None,
    trials: int = 1,
    k: Optional[int] = None,
) -> SatVerdict:
    """Observe the pipeline up to ``trials`` times; stop at the first T."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = Rng() if rng is None else rng
    value = evaluate(pipeline(f, k), cfg)
    for _ in range(trials):
        if xi_sample(value, rng) == TRUE:
            return SatVerdict.SATISFIABLE
    return SatVerdict.INCONCLUSIVE


def enumerate_formulas(k: int, depth: int) -> Iterator[BoolFormula]:
    """Every formula over v1..vk with connective nesting at most ``depth``."""
    seen: list[BoolFormula] = [Prop(i) for i in range(1, k + 1)]
    for _ in range(depth):
        nxt = list(seen)
        nxt += [Not(g) for g in seen]
        nxt += [And(g, h) for g in seen for h in seen]
        nxt += [Or(g, h) for g in seen for h in seen]
        seen = nxt
    return iter(seen)
