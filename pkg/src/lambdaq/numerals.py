"""Term constructors for Church numerals, booleans and signed integers.

Signed integers are the value of ``PAIR flag magnitude``, i.e.
``\\s. s flag magnitude``, with flag ``T`` for non-negative and ``F`` for
negative numbers; zero is always ``(T, 0)``.

Magnitudes of literals are Church numerals.  Arithmetic under call-by-value
does not reduce under binders, so ``S 2`` evaluates to
``\\x.\\y.x (2 x y)``, the *successor tower* over 2, rather than to the
numeral 3.  The two behave identically and decode to the same number.
"""

from __future__ import annotations

from .terms import App, Lam, Term, Var

TRUE = Lam("t", Lam("f", Var("t")))
FALSE = Lam("t", Lam("f", Var("f")))
IDENTITY = Lam("x", Var("x"))


def church(n: int) -> Term:
    """The numeral ``\\x.\\y.x (x (... (x y)))`` with ``n`` applications."""
    if n < 0:
        raise ValueError(f"Church numerals are natural numbers, got {n}")
    body: Term = Var("y")
    for _ in range(n):
        body = App(Var("x"), body)
    return Lam("x", Lam("y", body))


def successor_tower(n: int) -> Term:
    """The value of ``S (S (... (S 0)))``: behaves as ``church(n)``."""
    if n < 0:
        raise ValueError(f"expected a natural number, got {n}")
    t = church(0)
    for _ in range(n):
        t = Lam("x", Lam("y", App(Var("x"), App(App(t, Var("x")), Var("y")))))
    return t


def pair(first: Term, second: Term) -> Term:
    return Lam("s", App(App(Var("s"), first), second))


def int_term(z: int) -> Term:
    return pair(TRUE if z >= 0 else FALSE, church(abs(z)))
