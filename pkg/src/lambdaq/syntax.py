"""Concrete ASCII syntax.

Lexicon::

    \\x.M        abstraction (``λ`` is accepted as well)
    M N          application, left associative
    M, N         collection, lowest precedence, right associative
    ~M           negative sign on a variable or abstraction (``¬`` accepted)
    3, -2        Church numeral / signed integer literals
    # ...        comment to end of line

Programs are a flat list of ``let name = term;`` definitions followed by an
optional main term.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .numerals import church, int_term
from .terms import NEG, App, Coll, Lam, Neg, Term, Var, mk_collection, sorted_members

__all__ = [
    "Env",
    "Level",
    "ParseError",
    "SourceProgram",
    "parse",
    "parse_program",
    "print_term",
]


class Level(enum.Enum):
    """Calculus level: plain, randomized (collections) or quantumized (signs)."""

    LAMBDA = "l"
    P = "p"
    Q = "q"

    @classmethod
    def coerce(cls, value: "Level | str") -> "Level":
        return value if isinstance(value, Level) else cls(value)

    def allows(self, other: "Level") -> bool:
        order = [Level.LAMBDA, Level.P, Level.Q]
        return order.index(other) <= order.index(self)


def term_level(t: Term) -> Level:
    """The least level whose grammar admits ``t``."""
    if t.has_negative:
        return Level.Q
    if t.has_collection:
        return Level.P
    return Level.LAMBDA


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        where = f"{line}:{column}"
        hint = f" (expected {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{where}: {message}{hint}")


# -- lexer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'?-]*)
  | (?P<lam>\\|λ)
  | (?P<neg>~|¬)
  | (?P<punct>[.(),=;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "punct":
                kind = m.group()
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ---------------------------------------------------------------

_ATOM_START = {"ident", "int", "(", "lam", "neg"}


class _Parser:
    def __init__(self, text: str, level: Level):
        self.tokens = tokenize(text)
        self.i = 0
        self.level = level

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, expected: Iterable[str] = ()) -> ParseError:
        return ParseError(message, self.tok.line, self.tok.column, expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            shown = self.tok.text or "end of input"
            raise self.error(f"unexpected {shown!r}", {kind})
        tok = self.tok
        self.i += 1
        return tok

    def term(self) -> Term:
        parts = [self.application()]
        while self.tok.kind == ",":
            if self.level is Level.LAMBDA:
                raise self.error("collections are not part of the plain lambda calculus")
            self.i += 1
            parts.append(self.application())
        return mk_collection(parts)

    def application(self) -> Term:
        if self.tok.kind not in _ATOM_START:
            shown = self.tok.text or "end of input"
            raise self.error(f"unexpected {shown!r}", {"term"})
        t = None
        while self.tok.kind in _ATOM_START:
            extends = self._starts_abstraction()
            a = self.atom()
            t = a if t is None else App(t, a)
            if extends:
                break
        return t

    def _starts_abstraction(self) -> bool:
        j = self.i
        while self.tokens[j].kind == "neg":
            j += 1
        return self.tokens[j].kind == "lam"

    def atom(self) -> Term:
        tok = self.tok
        match tok.kind:
            case "ident":
                self.i += 1
                return Var(tok.text)
            case "int":
                self.i += 1
                n = int(tok.text)
                return church(n) if n >= 0 else int_term(n)
            case "(":
                self.i += 1
                t = self.term()
                self.expect(")")
                return t
            case "lam":
                self.i += 1
                binder = self.expect("ident").text
                self.expect(".")
                return Lam(binder, self.application())
            case "neg":
                if self.level is not Level.Q:
                    raise self.error("signs belong to the quantumized calculus (use level q)")
                self.i += 1
                inner = self.atom()
                match inner:
                    case Var(name, sign):
                        return Var(name, -sign)
                    case Lam(binder, body, sign):
                        return Lam(binder, body, -sign)
                raise ParseError(
                    "a sign may only prefix a variable or an abstraction", tok.line, tok.column
                )
        raise self.error(f"unexpected {tok.text!r}", {"term"})


def parse(text: str, level: Level | str = Level.Q) -> Term:
    """Parse one term.  Free identifiers stay free variables."""
    p = _Parser(text, Level.coerce(level))
    t = p.term()
    p.expect("eof")
    return t


# -- printer --------------------------------------------------------------
#
# prec 0: anywhere; 1: no bare collection (abstraction body, collection
# member); 2: operator position; 3: operand position.  ``tail`` says nothing
# follows on the right, so an abstraction may go unparenthesized.


def print_term(t: Term) -> str:
    return _fmt(t, 0, True)


def _sign(s) -> str:
    return "~" if s is NEG else ""


def _fmt(t: Term, prec: int, tail: bool) -> str:
    match t:
        case Var(name, sign):
            return _sign(sign) + name
        case Lam(binder, body, sign):
            text = f"{_sign(sign)}\\{binder}.{_fmt(body, 1, True)}"
            return text if tail and prec != 2 else f"({text})"
        case App(fun, arg):
            if prec == 3:
                return f"({_fmt(t, 0, True)})"
            return f"{_fmt(fun, 2, False)} {_fmt(arg, 3, tail)}"
        case Coll():
            text = ", ".join(_fmt(m, 1, True) for m in sorted_members(t))
            return text if prec == 0 else f"({text})"
        case Neg(inner):
            return f"~({_fmt(inner, 0, True)})"
    raise TypeError(f"not a term: {t!r}")


# -- environments and programs --------------------------------------------


class Env:
    """Named closed terms, substituted for free occurrences of their names."""

    def __init__(self, definitions: Iterable[tuple[str, Term]] = ()):
        self._defs: dict[str, Term] = {}
        for name, body in definitions:
            self.define(name, body)

    def define(self, name: str, body: Term) -> None:
        resolved = self.resolve(body)
        if resolved.free_vars:
            missing = ", ".join(sorted(resolved.free_vars))
            raise NameError(f"definition of {name} refers to unknown names: {missing}")
        self._defs[name] = resolved

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __getitem__(self, name: str) -> Term:
        return self._defs[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._defs)

    def __len__(self) -> int:
        return len(self._defs)

    def copy(self) -> "Env":
        env = Env()
        env._defs = dict(self._defs)
        return env

    def resolve(self, t: Term) -> Term:
        """Substitute definitions for the free names of ``t``."""
        if self._defs.keys().isdisjoint(t.free_vars):
            return t
        return self._resolve(t, frozenset())

    def _resolve(self, t: Term, bound: frozenset) -> Term:
        if self._defs.keys().isdisjoint(t.free_vars - bound):
            return t
        match t:
            case Var(name, sign):
                from .rewrite import scale

                return scale(sign, self._defs[name])
            case Lam(binder, body, sign):
                return Lam(binder, self._resolve(body, bound | {binder}), sign)
            case App(fun, arg):
                return App(self._resolve(fun, bound), self._resolve(arg, bound))
            case Coll(ms):
                return mk_collection(self._resolve(m, bound) for m in ms)
            case Neg(inner):
                from .rewrite import scale

                return scale(NEG, self._resolve(inner, bound))
        raise TypeError(f"not a term: {t!r}")


@dataclass
class SourceProgram:
    definitions: list[tuple[str, Term]] = field(default_factory=list)
    main: Optional[Term] = None
    env: Env = field(default_factory=Env)

    def resolved_main(self) -> Optional[Term]:
        return None if self.main is None else self.env.resolve(self.main)


def parse_program(text: str, level: Level | str = Level.Q, base: Optional[Env] = None) -> SourceProgram:
    """Parse ``let`` definitions and an optional trailing main term.

    Names resolve against ``base`` (the prelude, by default) and earlier
    definitions.  The main term may keep free variables.
    """
    if base is None:
        from .prelude import PRELUDE

        base = PRELUDE
    p = _Parser(text, Level.coerce(level))
    program = SourceProgram(env=base.copy())
    seen: set[str] = set()
    while p.tok.kind == "ident" and p.tok.text == "let":
        p.i += 1
        name_tok = p.expect("ident")
        p.expect("=")
        body = p.term()
        if p.tok.kind != "eof":
            p.expect(";")
        if name_tok.text in seen:
            raise ParseError(f"duplicate definition of {name_tok.text}", name_tok.line, name_tok.column)
        try:
            program.env.define(name_tok.text, body)
        except NameError as exc:
            raise ParseError(str(exc), name_tok.line, name_tok.column) from None
        seen.add(name_tok.text)
        program.definitions.append((name_tok.text, body))
    if p.tok.kind != "eof":
        program.main = p.term()
        if p.tok.kind == ";":
            p.i += 1
    p.expect("eof")
    return program
