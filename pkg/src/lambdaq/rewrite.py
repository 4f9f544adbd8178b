"""Substitution, sign scaling, gamma-normalization and beta-gamma reduction.

Redex positions are reported as :class:`RedexPath` values: child indices from
the root (application: 0 operator, 1 operand; abstraction and negation: 0;
collection: member index).
"""

from __future__ import annotations

import re
from typing import Callable, Iterator, Optional

from .terms import (
    NEG,
    POS,
    App,
    Coll,
    Lam,
    Neg,
    Sign,
    Term,
    Var,
    children,
    members,
    mk_collection,
    sign_concat,
)

__all__ = [
    "RedexPath",
    "beta_gamma_step",
    "beta_p_contract",
    "fresh_name",
    "gamma_normalize",
    "gamma_redexes",
    "gamma_step",
    "has_gamma_redex",
    "normalize",
    "reduce_gamma",
    "replace_at",
    "scale",
    "sign_concat",
    "subterm_at",
    "substitute",
    "trace_line",
]


class RedexPath(tuple):
    """Child indices from the root to a subterm."""

    def __str__(self) -> str:
        return "/" + "/".join(map(str, self))


# -- signs ----------------------------------------------------------------


def scale(s: Sign, t: Term) -> Term:
    """Prefix ``t`` with sign ``s``.

    Signed variables and abstractions absorb the sign, collections distribute
    it over their members, applications are wrapped in :class:`Neg` (and
    unwrapped when already negated).
    """
    if s is POS:
        return t
    match t:
        case Var(name, sign):
            return Var(name, -sign)
        case Lam(binder, body, sign):
            return Lam(binder, body, -sign)
        case Coll(ms):
            return Coll(tuple(scale(s, m) for m in ms))
        case App():
            return Neg(t)
        case Neg(inner):
            return inner
    raise TypeError(f"not a term: {t!r}")


# -- substitution -----------------------------------------------------------

_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh_name(base: str, avoid: frozenset | set) -> str:
    """Smallest ``base<k>`` (k = 1, 2, ...) not in ``avoid``."""
    stem = _TRAILING_DIGITS.sub("", base) or "z"
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def substitute(body: Term, replacement: Term, var: str) -> Term:
    """Capture-avoiding ``body[replacement/var]``.

    A signed occurrence ``S var`` becomes ``scale(S, replacement)``.
    """
    if var not in body.free_vars:
        return body
    match body:
        case Var(name, sign):
            return scale(sign, replacement)
        case App(fun, arg):
            return App(substitute(fun, replacement, var), substitute(arg, replacement, var))
        case Lam(binder, inner, sign):
            if binder not in replacement.free_vars:
                return Lam(binder, substitute(inner, replacement, var), sign)
            z = fresh_name(binder, inner.free_vars | replacement.free_vars | {var})
            renamed = substitute(inner, Var(z), binder)
            return Lam(z, substitute(renamed, replacement, var), sign)
        case Coll(ms):
            return mk_collection(substitute(m, replacement, var) for m in ms)
        case Neg(inner):
            return scale(NEG, substitute(inner, replacement, var))
    raise TypeError(f"not a term: {body!r}")


# -- paths ----------------------------------------------------------------


def subterm_at(t: Term, path: tuple) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    """Replace the subterm at ``path``; collections re-flatten on the way up."""
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t:
        case App(fun, arg):
            return App(replace_at(fun, rest, new), arg) if i == 0 else App(fun, replace_at(arg, rest, new))
        case Lam(binder, body, sign):
            return Lam(binder, replace_at(body, rest, new), sign)
        case Coll(ms):
            return mk_collection(ms[:i] + (replace_at(ms[i], rest, new),) + ms[i + 1 :])
        case Neg(inner):
            return scale(NEG, replace_at(inner, rest, new))
    raise IndexError(f"no child {i} in {t!r}")


def _walk(t: Term, path: tuple, pre: bool, reverse: bool) -> Iterator[tuple]:
    """Yield ``(path, subterm)`` in pre- or post-order."""
    if pre:
        yield path, t
    kids = list(enumerate(children(t)))
    if reverse:
        kids.reverse()
    for i, c in kids:
        yield from _walk(c, path + (i,), pre, reverse)
    if not pre:
        yield path, t


# -- gamma ----------------------------------------------------------------


def _is_gamma_redex(t: Term) -> bool:
    return isinstance(t, App) and (isinstance(t.fun, Coll) or isinstance(t.arg, Coll))


def has_gamma_redex(t: Term) -> bool:
    if not t.has_collection:
        return False
    return any(_is_gamma_redex(s) for _, s in _walk(t, (), True, False))


def gamma_redexes(t: Term, strategy: str = "leftmost-innermost") -> Iterator[RedexPath]:
    """Paths of all gamma-redexes, in the order the strategy would pick them."""
    if not t.has_collection:
        return
    pre, reverse = _STRATEGIES[strategy]
    for path, s in _walk(t, (), pre, reverse):
        if _is_gamma_redex(s):
            yield RedexPath(path)


_STRATEGIES = {
    "leftmost-innermost": (False, False),
    "leftmost-outermost": (True, False),
    "rightmost-innermost": (False, True),
    "rightmost-outermost": (True, True),
}


def _expand(app: App) -> Term:
    return mk_collection(App(m, n) for m in members(app.fun) for n in members(app.arg))


def gamma_step(t: Term, strategy: str = "leftmost-innermost") -> Optional[tuple]:
    """Contract one gamma-redex; returns ``(term, path)`` or None.

    The redex ``[M_i] [N_j]`` becomes the collection of every ``M_i N_j``,
    operator-major.
    """
    path = next(gamma_redexes(t, strategy), None)
    if path is None:
        return None
    return replace_at(t, path, _expand(subterm_at(t, path))), path


def reduce_gamma(t: Term, strategy: str = "leftmost-innermost", limit: int = 1_000_000) -> Term:
    """Iterate :func:`gamma_step` to a normal form."""
    for _ in range(limit):
        step = gamma_step(t, strategy)
        if step is None:
            return t
        t = step[0]
    raise RuntimeError(f"gamma reduction did not finish within {limit} steps")


def gamma_normalize(t: Term) -> Term:
    """The gamma-normal form, by structural recursion."""
    if not t.has_collection:
        return t
    match t:
        case Lam(binder, body, sign):
            return Lam(binder, gamma_normalize(body), sign)
        case Coll(ms):
            return mk_collection(gamma_normalize(m) for m in ms)
        case Neg(inner):
            return scale(NEG, gamma_normalize(inner))
        case App(fun, arg):
            app = App(gamma_normalize(fun), gamma_normalize(arg))
            return _expand(app) if _is_gamma_redex(app) else app
    return t


# -- beta-gamma -------------------------------------------------------------


def _is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Lam)


def _contract(redex: App) -> Term:
    lam = redex.fun
    return scale(lam.sign, substitute(lam.body, redex.arg, lam.binder))


def beta_gamma_step(t: Term, strategy: str = "leftmost-outermost") -> Optional[tuple]:
    """Contract one beta-redex of a gamma-normal term and gamma-normalize.

    Returns ``(term, path)`` or None when ``t`` has no beta-redex.  The
    contractum replaces the redex in context and the whole result is brought
    back to gamma-normal form, so steps can be iterated.
    """
    if has_gamma_redex(t):
        raise ValueError("beta_gamma_step expects a gamma-normal term")
    pre, reverse = _STRATEGIES[strategy]
    for path, s in _walk(t, (), pre, reverse):
        if _is_beta_redex(s):
            contractum = gamma_normalize(_contract(s))
            return gamma_normalize(replace_at(t, path, contractum)), RedexPath(path)
    return None


def beta_p_contract(redex: App) -> Term:
    """Contract ``(S\\x.M) [N_i]`` to the collection of ``gamma(S M[N_i/x])``.

    This is the collection-aware beta rule, kept as an independent route to
    compare against "gamma-expand, then beta each member".
    """
    if not _is_beta_redex(redex):
        raise ValueError("not a beta-redex")
    lam = redex.fun
    return mk_collection(
        gamma_normalize(scale(lam.sign, substitute(lam.body, n, lam.binder)))
        for n in members(redex.arg)
    )


def normalize(
    t: Term,
    fuel: int = 100_000,
    strategy: str = "leftmost-outermost",
    on_step: Optional[Callable[[str, RedexPath, Term], None]] = None,
) -> Term:
    """Full beta-gamma normal form (reduces under binders)."""
    t = gamma_normalize(t)
    for _ in range(fuel):
        step = beta_gamma_step(t, strategy)
        if step is None:
            return t
        t, path = step
        if on_step is not None:
            on_step("beta", path, t)
    raise RuntimeError(f"no normal form within {fuel} beta steps")


def trace_line(rule: str, path: tuple, t: Term) -> str:
    return f"{rule} @ {RedexPath(path)}: {t}"
