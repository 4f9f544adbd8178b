"""Term representation shared by the plain, randomized and quantumized calculi.

A single immutable AST covers all three calculi.  Plain lambda terms are the
collection-free, sign-free fragment; randomized terms may contain
collections; quantumized terms additionally carry a sign on every variable
and abstraction.

Collections are stored flattened: a member of a :class:`Coll` is never itself
a collection, and a collection always has at least two members.  Build them
with :func:`mk_collection` rather than the constructor.

Equality (``==``) and hashing are *term identity*: alpha-equivalence plus the
multiset quotient on collections.  Use :func:`same_syntax` when the exact
spelling matters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional


class TermError(ValueError):
    """Raised when a term would violate a structural invariant."""


class Sign(enum.Enum):
    POS = "+"
    NEG = "-"

    def __mul__(self, other: "Sign") -> "Sign":
        return sign_concat(self, other)

    def __neg__(self) -> "Sign":
        return Sign.NEG if self is Sign.POS else Sign.POS

    @property
    def negative(self) -> bool:
        return self is Sign.NEG


POS = Sign.POS
NEG = Sign.NEG


def sign_concat(a: Sign, b: Sign) -> Sign:
    """Concatenate two signs: ``++ -> +``, ``+- -> -``, ``-+ -> -``, ``-- -> +``."""
    return POS if a is b else NEG


class Term:
    """Base class of all terms.  Instances are immutable."""

    __match_args__: tuple = ()

    @cached_property
    def free_vars(self) -> frozenset:
        return _free_vars(self)

    @cached_property
    def has_collection(self) -> bool:
        return isinstance(self, Coll) or any(c.has_collection for c in children(self))

    @cached_property
    def has_negative(self) -> bool:
        """True if a negative sign or a negation wrapper occurs anywhere."""
        if isinstance(self, Neg):
            return True
        if isinstance(self, (Var, Lam)) and self.sign is NEG:
            return True
        return any(c.has_negative for c in children(self))

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in children(self))

    @cached_property
    def key(self) -> tuple:
        """Canonical key: de Bruijn indices for bound names, sorted collections."""
        return _build_key(self, {}, 0)

    @cached_property
    def _hash(self) -> int:
        return hash(self.key)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self._hash == other._hash and self.key == other.key

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        from .syntax import print_term

        return print_term(self)


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str
    sign: Sign = POS


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, eq=False)
class Lam(Term):
    binder: str
    body: Term
    sign: Sign = POS


@dataclass(frozen=True, eq=False)
class Coll(Term):
    members: tuple

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise TermError("a collection needs at least two members")
        if any(isinstance(m, Coll) for m in self.members):
            raise TermError("collection members must be flattened; use mk_collection")


@dataclass(frozen=True, eq=False)
class Neg(Term):
    """Negation of an application.  Internal to reduction, never parsed."""

    inner: Term

    def __post_init__(self) -> None:
        if not isinstance(self.inner, App):
            raise TermError("only applications are wrapped in Neg; use rewrite.scale")


def children(t: Term) -> tuple:
    match t:
        case Var():
            return ()
        case App(fun, arg):
            return (fun, arg)
        case Lam(_, body, _):
            return (body,)
        case Coll(members):
            return members
        case Neg(inner):
            return (inner,)
    raise TypeError(f"not a term: {t!r}")


def mk_collection(members: Iterable[Term]) -> Term:
    """Build a collection, flattening nested collections.

    A single member is returned as is; an empty list is an error.
    """
    flat: list[Term] = []
    for m in members:
        if isinstance(m, Coll):
            flat.extend(m.members)
        else:
            flat.append(m)
    if not flat:
        raise TermError("empty collection")
    if len(flat) == 1:
        return flat[0]
    return Coll(tuple(flat))


def members(t: Term) -> tuple:
    """Members of the maximal flattening of ``t`` (``(t,)`` for non-collections)."""
    return t.members if isinstance(t, Coll) else (t,)


def cardinality(t: Term) -> int:
    return len(t.members) if isinstance(t, Coll) else 1


def free_vars(t: Term) -> frozenset:
    return t.free_vars


def _free_vars(t: Term) -> frozenset:
    match t:
        case Var(name, _):
            return frozenset((name,))
        case Lam(binder, body, _):
            return body.free_vars - {binder}
    out: frozenset = frozenset()
    for c in children(t):
        out |= c.free_vars
    return out


def opposite(t: Term) -> Optional[Term]:
    """The same signed variable or abstraction with the other sign, else None."""
    match t:
        case Var(name, sign):
            return Var(name, -sign)
        case Lam(binder, body, sign):
            return Lam(binder, body, -sign)
    return None


def term_equal(a: Term, b: Term) -> bool:
    return a == b


def same_syntax(a: Term, b: Term) -> bool:
    """Exact structural equality, including binder names and member order."""
    if a is b:
        return True
    if type(a) is not type(b):
        return False
    match a:
        case Var(name, sign):
            return name == b.name and sign is b.sign
        case Lam(binder, body, sign):
            return binder == b.binder and sign is b.sign and same_syntax(body, b.body)
    ca, cb = children(a), children(b)
    return len(ca) == len(cb) and all(same_syntax(x, y) for x, y in zip(ca, cb))


# -- canonical keys ---------------------------------------------------------
#
# Tags order the constructors: var < lam < app < coll < neg.  A variable key
# is (0, sign, 0, index) when bound and (0, sign, 1, name) when free, so keys
# of equal tag always compare field by field with matching types.


def _sign_bit(s: Sign) -> int:
    return 1 if s is NEG else 0


def canonical_key(t: Term, env: dict, depth: int) -> tuple:
    """Key of ``t`` under binders ``env`` (name -> binding level) at ``depth``."""
    if not env or env.keys().isdisjoint(t.free_vars):
        return t.key
    return _build_key(t, env, depth)


def _build_key(t: Term, env: dict, depth: int) -> tuple:
    match t:
        case Var(name, sign):
            if name in env:
                return (0, _sign_bit(sign), 0, depth - 1 - env[name])
            return (0, _sign_bit(sign), 1, name)
        case Lam(binder, body, sign):
            inner = dict(env)
            inner[binder] = depth
            return (1, _sign_bit(sign), canonical_key(body, inner, depth + 1))
        case App(fun, arg):
            return (2, canonical_key(fun, env, depth), canonical_key(arg, env, depth))
        case Coll(ms):
            return (3, tuple(sorted(canonical_key(m, env, depth) for m in ms)))
        case Neg(inner):
            return (4, canonical_key(inner, env, depth))
    raise TypeError(f"not a term: {t!r}")


def alpha_canonical(t: Term) -> Term:
    """Rename binders by depth and sort collection members by canonical key.

    Two terms are identical (``==``) iff their canonical forms have the same
    syntax.  The result is a fixpoint of this function.
    """
    avoid = t.free_vars

    def name_for(depth: int) -> str:
        name = f"v{depth}"
        while name in avoid:
            name += "'"
        return name

    def go(t: Term, levels: dict, names: dict, depth: int) -> Term:
        match t:
            case Var(name, sign):
                return Var(names.get(name, name), sign)
            case Lam(binder, body, sign):
                new = name_for(depth)
                return Lam(
                    new,
                    go(body, {**levels, binder: depth}, {**names, binder: new}, depth + 1),
                    sign,
                )
            case App(fun, arg):
                return App(go(fun, levels, names, depth), go(arg, levels, names, depth))
            case Coll(ms):
                ordered = sorted(ms, key=lambda m: canonical_key(m, levels, depth))
                return Coll(tuple(go(m, levels, names, depth) for m in ordered))
            case Neg(inner):
                return Neg(go(inner, levels, names, depth))
        raise TypeError(f"not a term: {t!r}")

    return go(t, {}, {}, 0)


def sorted_members(t: Term) -> list:
    """Members of ``t`` in the fixed canonical order."""
    return sorted(members(t), key=lambda m: m.key)
