"""Reference terms and host-value encoders/decoders.

The definitions live in ``prelude.lq`` (shipped with the package) and are
loaded once into :data:`PRELUDE`.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .numerals import FALSE, IDENTITY, TRUE, church, int_term, pair, successor_tower
from .rewrite import normalize
from .syntax import Env, Level, parse_program, term_level
from .terms import App, Lam, Term, Var

__all__ = [
    "PRELUDE",
    "PreludeEntry",
    "DecodeError",
    "builtin",
    "church",
    "decode_bool",
    "decode_church",
    "decode_int",
    "describe",
    "entries",
    "int_term",
    "pair",
    "prelude_source",
    "successor_tower",
    "write_prelude",
]


class DecodeError(ValueError):
    """A term is not an encoding of the requested host value."""


@dataclass(frozen=True)
class PreludeEntry:
    name: str
    term: Term
    level: Level


def prelude_source() -> str:
    return resources.files("lambdaq").joinpath("prelude.lq").read_text(encoding="utf-8")


def write_prelude(path: str | Path) -> Path:
    """Install the prelude source to ``path``."""
    path = Path(path)
    path.write_text(prelude_source(), encoding="utf-8")
    return path


def _load() -> Env:
    return parse_program(prelude_source(), Level.Q, base=Env()).env


PRELUDE: Env = _load()


def builtin(name: str) -> Term:
    """The closed term bound to ``name`` in the prelude."""
    try:
        return PRELUDE[name]
    except KeyError:
        raise KeyError(f"unknown prelude name: {name}") from None


def entries() -> list[PreludeEntry]:
    return [PreludeEntry(name, PRELUDE[name], term_level(PRELUDE[name])) for name in PRELUDE]


# -- decoding -------------------------------------------------------------


def _require_plain(t: Term) -> None:
    if t.has_collection or t.has_negative:
        raise DecodeError(f"not a plain lambda term: {t}")


def decode_church(t: Term, fuel: int = 100_000) -> int:
    """``n`` if ``t`` beta-normalizes to the Church numeral ``n``."""
    _require_plain(t)
    try:
        nf = normalize(t, fuel)
    except RuntimeError as exc:
        raise DecodeError(str(exc)) from None
    match nf:
        case Lam(x, Lam(y, body)) if x != y:
            n = 0
            while isinstance(body, App) and body.fun == Var(x):
                body, n = body.arg, n + 1
            if body == Var(y):
                return n
    raise DecodeError(f"not a Church numeral: {t}")


def decode_bool(t: Term) -> bool:
    if t == TRUE:
        return True
    if t == FALSE:
        return False
    raise DecodeError(f"not a boolean: {t}")


def decode_int(t: Term, fuel: int = 100_000) -> int:
    """Decode a signed integer ``PAIR flag magnitude``."""
    from .evaluation import EvalConfig, EvalError, evaluate

    _require_plain(t)
    cfg = EvalConfig(fuel=fuel, level=Level.LAMBDA)
    try:
        flag = evaluate(App(t, TRUE), cfg)
        magnitude = evaluate(App(t, FALSE), cfg)
    except EvalError as exc:
        raise DecodeError(f"not a signed integer: {t} ({exc})") from None
    n = decode_church(magnitude, fuel)
    return n if decode_bool(flag) else -n


def describe(t: Term) -> Optional[str]:
    """A short host-level reading of ``t`` (boolean, identity, numeral), if any."""
    if t.has_collection or t.has_negative:
        return None
    if t == TRUE:
        return "T"
    if t == FALSE:
        return "F = 0"
    if t == IDENTITY:
        return "I"
    for decode in (decode_church, decode_int):
        try:
            return str(decode(t, 10_000))
        except DecodeError:
            pass
    return None
