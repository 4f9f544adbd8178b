"""Observation: sampling a collection down to one plain lambda term.

``theta_sample`` observes randomized terms by replacing each collection with
one uniformly drawn member.  Quantumized terms first go through ``delta``,
which cancels opposite members and strips signs; ``xi_sample`` is the
composition.  ``exact_distribution`` computes the law of those samplers with
exact rational arithmetic.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Mapping
from fractions import Fraction
from typing import Any, Callable, Optional

import numpy as np

from .evaluation import EvalConfig, evaluate
from .syntax import Level, print_term
from .terms import POS, App, Coll, Lam, Neg, Term, Var, alpha_canonical, members, mk_collection, opposite

__all__ = [
    "Distribution",
    "ObservationFailure",
    "Rng",
    "delta",
    "exact_distribution",
    "member_distribution",
    "observe_program",
    "sample_many",
    "statistically_indistinguishable",
    "theta_sample",
    "xi_sample",
]


class Rng:
    """Seeded generator: numpy's PCG64 behind a small interface.

    Without a seed one is drawn from OS entropy and kept in ``seed`` so the
    run can be replayed.

    ``spawn(i)`` derives the i-th independent stream from the same seed, so
    batch sampling does not depend on the order draws are made in.
    """

    def __init__(self, seed: Optional[int] = None):
        if seed is None:
            seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self._seq = np.random.SeedSequence(self.seed)
        self._gen: Optional[np.random.Generator] = None

    def uniform_below(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        if self._gen is None:
            # built on first use: spawned streams that never draw stay cheap
            self._gen = np.random.Generator(np.random.PCG64(self._seq))
        return int(self._gen.integers(n))

    def spawn(self, index: int) -> "Rng":
        child = Rng.__new__(Rng)
        child.seed = self.seed
        child._seq = np.random.SeedSequence(self.seed, spawn_key=(index,))
        child._gen = None
        return child


class ObservationFailure(Exception):
    """A collection cancelled down to nothing, so the term cannot be observed."""

    def __init__(self, offending: Term, reason: str = "empty-collection-after-cancellation"):
        self.reason = reason
        self.offending = offending
        super().__init__(f"unobservable: {reason} in {offending}")


class Distribution(Mapping):
    """Finite probability map from terms (up to identity) to exact rationals."""

    def __init__(self, weights: Mapping[Term, Fraction]):
        probs: dict[Term, Fraction] = defaultdict(Fraction)
        for t, p in weights.items():
            probs[t] += Fraction(p)
        if any(p <= 0 for p in probs.values()):
            raise ValueError("probabilities must be positive")
        if sum(probs.values()) != 1:
            raise ValueError(f"probabilities sum to {sum(probs.values())}, not 1")
        self._probs = dict(probs)

    @classmethod
    def point(cls, t: Term) -> "Distribution":
        return cls({t: Fraction(1)})

    def __getitem__(self, t: Term) -> Fraction:
        return self._probs[t]

    def __iter__(self):
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self) -> str:
        inner = ", ".join(f"{t}: {p}" for t, p in self.sorted_items())
        return f"Distribution({{{inner}}})"

    def sorted_items(self) -> list[tuple[Term, Fraction]]:
        return sorted(self._probs.items(), key=lambda kv: kv[0].key)

    def pushforward(self, fn: Callable[[Term], Any]) -> dict:
        """Law of ``fn(X)``: probabilities of terms mapping to the same value add up."""
        out: dict = defaultdict(Fraction)
        for t, p in self._probs.items():
            out[fn(t)] += p
        return dict(out)

    def serialize(self) -> str:
        """One ``p/q <canonical term>`` line per support point, canonical order."""
        return "".join(
            f"{p.numerator}/{p.denominator} {print_term(alpha_canonical(t))}\n"
            for t, p in self.sorted_items()
        )


# -- delta ------------------------------------------------------------------


def _cancel(ms: tuple, pairwise: bool) -> list:
    """Drop opposite members of one collection node."""
    counts = Counter(ms)
    if pairwise:
        remove: Counter = Counter()
        for t, n in counts.items():
            o = opposite(t)
            if o is not None and o in counts and t.sign is POS:
                k = min(n, counts[o])
                remove[t] += k
                remove[o] += k
        survivors = []
        for m in ms:
            if remove[m]:
                remove[m] -= 1
            else:
                survivors.append(m)
        return survivors
    return [m for m in ms if (o := opposite(m)) is None or o not in counts]


def delta(t: Term, pairwise: bool = True) -> Term:
    """Cancel opposite pairs in every collection, then strip all signs.

    Cancellation at a collection node looks at the raw members before
    recursing into the survivors.  With ``pairwise=False`` every member that
    has an opposite anywhere in the collection is dropped instead.
    """
    if not t.has_negative:
        return t
    match t:
        case Var(name, _):
            return Var(name)
        case Lam(binder, body, _):
            return Lam(binder, delta(body, pairwise))
        case App(fun, arg):
            return App(delta(fun, pairwise), delta(arg, pairwise))
        case Neg(inner):
            return delta(inner, pairwise)
        case Coll(ms):
            survivors = _cancel(ms, pairwise)
            if not survivors:
                raise ObservationFailure(t)
            return mk_collection(delta(m, pairwise) for m in survivors)
    raise TypeError(f"not a term: {t!r}")


# -- sampling ---------------------------------------------------------------


def theta_sample(t: Term, rng: Rng) -> Term:
    """Replace every collection, recursively, by one uniformly drawn member."""
    if not t.has_collection:
        return t
    match t:
        case Lam(binder, body, sign):
            return Lam(binder, theta_sample(body, rng), sign)
        case App(fun, arg):
            return App(theta_sample(fun, rng), theta_sample(arg, rng))
        case Coll(ms):
            return theta_sample(ms[rng.uniform_below(len(ms))], rng)
        case Neg(inner):
            return Neg(theta_sample(inner, rng))
    return t


def xi_sample(t: Term, rng: Rng, pairwise: bool = True) -> Term:
    return theta_sample(delta(t, pairwise), rng)


def sample_many(t: Term, n: int, seed: int, level: Level | str = Level.Q) -> Counter:
    """Observe a value ``n`` times with per-draw streams split from ``seed``."""
    level = Level.coerce(level)
    base = Rng(seed)
    if level is Level.Q:
        t = delta(t)
    if not t.has_collection:
        return Counter({t: n})
    return Counter(theta_sample(t, base.spawn(i)) for i in range(n))


# -- distributions ----------------------------------------------------------


def member_distribution(t: Term) -> Distribution:
    """Proportions of identical top-level members (after cancellation)."""
    ms = members(delta(t))
    n = len(ms)
    return Distribution({m: Fraction(c, n) for m, c in Counter(ms).items()})


def exact_distribution(t: Term, pairwise: bool = True) -> Distribution:
    """The exact law of ``xi_sample(t, .)`` (``theta_sample`` for sign-free terms)."""
    return Distribution(_law(delta(t, pairwise)))


def _law(t: Term) -> dict:
    if not t.has_collection:
        return {t: Fraction(1)}
    out: dict = defaultdict(Fraction)
    match t:
        case Lam(binder, body, sign):
            for b, p in _law(body).items():
                out[Lam(binder, b, sign)] += p
        case App(fun, arg):
            fl, al = _law(fun), _law(arg)
            for f, p in fl.items():
                for a, q in al.items():
                    out[App(f, a)] += p * q
        case Coll(ms):
            w = Fraction(1, len(ms))
            for m in ms:
                for s, p in _law(m).items():
                    out[s] += w * p
        case Neg(inner):
            for s, p in _law(inner).items():
                out[Neg(s)] += p
    return out


def statistically_indistinguishable(a: Mapping, b: Mapping) -> bool:
    """Equal observation proportions on every class of identical terms."""
    return dict(a.items()) == dict(b.items())


def observe_program(t: Term, cfg: EvalConfig = EvalConfig(), rng: Optional[Rng] = None) -> Term:
    """Evaluate, then observe at the configured level."""
    v = evaluate(t, cfg)
    if cfg.level is Level.LAMBDA:
        return v
    if rng is None:
        raise ValueError("observation needs an Rng")
    if cfg.level is Level.P:
        return theta_sample(v, rng)
    return xi_sample(v, rng)
