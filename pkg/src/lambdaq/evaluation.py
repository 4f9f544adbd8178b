"""Call-by-value evaluation with fuel accounting.

Values are signed variables, signed abstractions and collections of values,
all free of gamma-redexes.  Evaluation follows the rules::

    (Refl)  v ~> v
    (Eval)  gamma(M) ~> S\\x.P    gamma(N) ~> N'    gamma(S P[N'/x]) ~> v
            ----------------------------------------------------------
                                    M N ~> v
    (Coll)  gamma(M) ~> v1    gamma(N) ~> v2
            --------------------------------
                    (M, N) ~> (v1, v2)

When the operator or operand value is a collection, the application of the
two values is gamma-expanded and evaluated as a collection; only a single
abstraction applied to a single value is beta-contracted.  Each contraction
costs one unit of fuel.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Optional

from .rewrite import RedexPath, gamma_normalize, has_gamma_redex, replace_at, scale, subterm_at, substitute
from .syntax import Level, term_level
from .terms import NEG, App, Coll, Lam, Neg, Term, Var, mk_collection

__all__ = ["EvalConfig", "EvalError", "Level", "cbv_step", "evaluate", "evaluate_small_step", "is_value"]

Tracer = Callable[[str, RedexPath, Term], None]


@dataclass(frozen=True)
class EvalConfig:
    fuel: int = 1_000_000
    level: Level = Level.Q

    def __post_init__(self) -> None:
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")
        object.__setattr__(self, "level", Level.coerce(self.level))


class EvalError(Exception):
    """Evaluation failed: ``kind`` is fuel_exhausted, stuck or level_violation."""

    def __init__(self, kind: str, offending: Term, message: str = ""):
        self.kind = kind
        self.offending = offending
        super().__init__(message or f"{kind}: {offending}")


def is_value(t: Term) -> bool:
    match t:
        case Var() | Lam():
            return not has_gamma_redex(t)
        case Coll(ms):
            return all(is_value(m) for m in ms)
    return False


def check_level(t: Term, level: Level) -> None:
    needed = term_level(t)
    if not level.allows(needed):
        raise EvalError(
            "level_violation", t, f"term needs level {needed.value}, running at {level.value}: {t}"
        )


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, left: int):
        self.left = left

    def spend(self, redex: Term) -> None:
        if self.left <= 0:
            raise EvalError("fuel_exhausted", redex, "fuel exhausted")
        self.left -= 1


def evaluate(t: Term, cfg: EvalConfig = EvalConfig()) -> Term:
    """Big-step call-by-value evaluation of ``t`` to a value."""
    check_level(t, cfg.level)
    if sys.getrecursionlimit() < 20_000:
        sys.setrecursionlimit(20_000)
    try:
        return _eval(gamma_normalize(t), _Fuel(cfg.fuel))
    except RecursionError:
        raise EvalError("fuel_exhausted", t, "evaluation nested too deeply") from None


def _eval(t: Term, fuel: _Fuel) -> Term:
    # ``t`` is always gamma-normal here.
    while True:
        match t:
            case Var() | Lam():
                return t
            case Coll(ms):
                return mk_collection(_eval(m, fuel) for m in ms)
            case Neg(inner):
                return scale(NEG, _eval(inner, fuel))
            case App(fun, arg):
                f = _eval(fun, fuel)
                a = _eval(arg, fuel)
                if isinstance(f, Coll) or isinstance(a, Coll):
                    t = gamma_normalize(App(f, a))
                    continue
                if isinstance(f, Lam):
                    fuel.spend(t)
                    t = gamma_normalize(scale(f.sign, substitute(f.body, a, f.binder)))
                    continue
                raise EvalError("stuck", App(f, a), f"stuck: free variable {f} in operator position")
            case _:
                raise TypeError(f"not a term: {t!r}")


# -- small-step ------------------------------------------------------------


def _next_redex(t: Term, path: tuple) -> Optional[tuple]:
    """Leftmost call-by-value redex outside abstractions: ``(rule, path)``."""
    match t:
        case Var() | Lam():
            return None
        case Coll(ms):
            for i, m in enumerate(ms):
                found = _next_redex(m, path + (i,))
                if found:
                    return found
            return None
        case Neg(inner):
            if is_value(inner):
                return "sign", path
            return _next_redex(inner, path + (0,))
        case App(fun, arg):
            if not is_value(fun):
                return _next_redex(fun, path + (0,))
            if not is_value(arg):
                return _next_redex(arg, path + (1,))
            if isinstance(fun, Lam):
                return "beta", path
            raise EvalError("stuck", t, f"stuck: free variable {fun} in operator position")
    raise TypeError(f"not a term: {t!r}")


def cbv_step(t: Term) -> Optional[tuple]:
    """One small call-by-value step on a gamma-normal term.

    Returns ``(term, path, rule)`` with ``rule`` ``"beta"`` or ``"sign"``, or
    None when ``t`` is a value.  The result is gamma-normalized as a whole.
    """
    found = _next_redex(t, ())
    if found is None:
        return None
    rule, path = found
    redex = subterm_at(t, path)
    if rule == "beta":
        lam = redex.fun
        contractum = scale(lam.sign, substitute(lam.body, redex.arg, lam.binder))
    else:
        contractum = scale(NEG, redex.inner)
    return gamma_normalize(replace_at(t, path, contractum)), RedexPath(path), rule


def evaluate_small_step(t: Term, cfg: EvalConfig = EvalConfig(), trace: Optional[Tracer] = None) -> Term:
    """Evaluate by iterating :func:`cbv_step`; reports each step to ``trace``."""
    check_level(t, cfg.level)
    g = gamma_normalize(t)
    if trace is not None and g is not t:
        trace("gamma", RedexPath(()), g)
    t = g
    fuel = _Fuel(cfg.fuel)
    while True:
        step = cbv_step(t)
        if step is None:
            return t
        new, path, rule = step
        if rule == "beta":
            fuel.spend(subterm_at(t, path))
        t = new
        if trace is not None:
            trace(rule, path, t)
