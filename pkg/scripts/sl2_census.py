"""Census of Nielsen reduction endpoints for random generating pairs of SL(2, Z).

    python3 scripts/sl2_census.py --pairs 500 --moves 25
"""

import argparse
from collections import Counter

import numpy as np

from mcgpairs import sl2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--moves", type=int, default=25)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    ends, stuck = Counter(), 0
    for _ in range(args.pairs):
        pair, _, _ = sl2.random_generating_pair(rng, args.moves)
        res = sl2.nielsen_reduce(pair, args.depth)
        if not res.canonical:
            stuck += 1
            continue
        forms = sorted(sl2.decompose(M).tokens() for M in res.pair)
        ends[tuple(forms)] += 1
    for forms, count in ends.most_common():
        print(f"{count:5d}  ({forms[0]}, {forms[1]})")
    print(f"{stuck} pairs stopped before a canonical endpoint")
    b = sl2.nielsen_class_bounds()
    print(f"Nielsen classes of generating pairs: between {b.lower} and {b.upper} (bounds, not a count)")


if __name__ == "__main__":
    main()
