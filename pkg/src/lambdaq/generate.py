"""Random terms for property tests and demos."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .evaluation import is_value
from .rewrite import gamma_normalize, has_gamma_redex
from .syntax import Level
from .terms import NEG, POS, App, Lam, Term, Var, mk_collection

__all__ = ["random_term", "random_value", "random_gamma_term", "random_affine_term", "random_signed_collection"]

_NAMES = ("x", "y", "z", "u", "w")


def _sign(rng: random.Random, level: Level):
    return NEG if level is Level.Q and rng.random() < 0.3 else POS


def random_term(
    rng: random.Random,
    level: Level | str = Level.P,
    depth: int = 4,
    max_members: int = 3,
    names: Sequence[str] = _NAMES,
) -> Term:
    """Any term of the level's grammar, free variables allowed."""
    level = Level.coerce(level)

    def go(d: int) -> Term:
        r = rng.random()
        if d == 0 or r < 0.25:
            return Var(rng.choice(names), _sign(rng, level))
        if r < 0.5:
            return Lam(rng.choice(names), go(d - 1), _sign(rng, level))
        if level is Level.LAMBDA or r < 0.8:
            return App(go(d - 1), go(d - 1))
        return mk_collection(go(d - 1) for _ in range(rng.randint(2, max_members)))

    return go(depth)


def random_gamma_term(rng: random.Random, depth: int = 5, max_members: int = 4, max_size: int = 60) -> Term:
    """A randomized term with at least one gamma-redex.

    Collections are kept near the leaves and applications shallow so the
    gamma-normal form stays small enough for exact distributions.
    """
    while True:
        t = random_term(rng, Level.P, depth, max_members)
        if t.size <= max_size and has_gamma_redex(t):
            return t


def random_value(rng: random.Random, level: Level | str = Level.P, depth: int = 5, max_members: int = 4, max_size: int = 80) -> Term:
    """A value: variable, abstraction or collection of values, gamma-free throughout."""
    while True:
        t = gamma_normalize(random_term(rng, level, depth, max_members))
        if t.size <= max_size and is_value(t):
            return t


def random_affine_term(
    rng: random.Random,
    depth: int = 5,
    max_members: int = 3,
    level: Level | str = Level.P,
    free: Optional[Sequence[str]] = ("a", "b", "c"),
) -> Term:
    """A term where every bound variable is used at most once.

    Beta steps then shrink the term, so every reduction sequence is finite.
    """
    level = Level.coerce(level)
    counter = iter(range(10**9))
    consts = list(free or ())

    def go(d: int, scope: list[str]) -> Term:
        r = rng.random()
        if d == 0 or r < 0.2:
            return leaf(scope)
        if r < 0.5:
            x = f"v{next(counter)}"
            scope.append(x)
            body = go(d - 1, scope)
            if x in scope:
                scope.remove(x)
            return Lam(x, body, _sign(rng, level))
        if level is Level.LAMBDA or r < 0.85:
            return App(go(d - 1, scope), go(d - 1, scope))
        return mk_collection(go(d - 1, scope) for _ in range(rng.randint(2, max_members)))

    def leaf(scope: list[str]) -> Term:
        if scope and rng.random() < 0.7:
            x = scope.pop(rng.randrange(len(scope)))
            return Var(x, _sign(rng, level))
        if consts:
            return Var(rng.choice(consts), _sign(rng, level))
        return Lam("i", Var("i"))

    return go(depth, [])


def random_signed_collection(rng: random.Random, atoms: Sequence[str] = ("a", "b"), max_members: int = 4) -> Term:
    """A small collection of signed variables, e.g. ``a, ~a, b``."""
    n = rng.randint(2, max_members)
    return mk_collection(Var(rng.choice(atoms), rng.choice((POS, NEG))) for _ in range(n))
