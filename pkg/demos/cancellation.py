"""Signed collections: opposite members cancel when observed.

    python3 demos/cancellation.py
"""

from lambdaq import ObservationFailure, Rng, exact_distribution, parse, xi_sample
from lambdaq.rewrite import gamma_normalize

rng = Rng(7)

for text in ("a, ~a, b", "a, a, ~a", "(a, ~a, b) z"):
    t = parse(text)
    print(f"{text:<16} ->", exact_distribution(t).serialize().strip().replace("\n", "; "))

# distributing the application first changes what survives
m = parse("(a, ~a, b) z")
print("gamma-normal form:", gamma_normalize(m))
print("its law:          ", exact_distribution(gamma_normalize(m)).serialize().strip().replace("\n", "; "))

try:
    xi_sample(parse("x, ~x"), rng)
except ObservationFailure as exc:
    print("x, ~x:", exc.reason)
