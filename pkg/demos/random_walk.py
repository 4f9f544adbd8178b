"""Three steps of a +-1 random walk, evaluated once and observed many times.

    python3 demos/random_walk.py [seed]
"""

import sys
from collections import Counter

from lambdaq import decode_church, decode_int, evaluate, exact_distribution, parse_program
from lambdaq.terms import members
from lambdaq.observe import sample_many

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1


def main() -> None:
    walk = evaluate(parse_program("W 3", "p").resolved_main())
    ends = [decode_int(m) for m in members(walk)]
    print(f"W 3 evaluates to a collection of {len(ends)} end points: {ends}")

    law = exact_distribution(walk).pushforward(decode_int)
    print("exact law:", {k: str(p) for k, p in sorted(law.items())})

    n = 10_000
    counts = Counter()
    for t, c in sample_many(walk, n, seed, "p").items():
        counts[decode_int(t)] += c
    print(f"{n} observations, seed {seed}:")
    for k in sorted(counts):
        print(f"  {k:+d}  {counts[k] / n:.4f}  (exact {float(law[k]):.4f})")

    # the uniform chooser R n is the other generator from the prelude
    r = evaluate(parse_program("R 3", "p").resolved_main())
    print("R 3 members:", [decode_church(m) for m in members(r)])


if __name__ == "__main__":
    main()
