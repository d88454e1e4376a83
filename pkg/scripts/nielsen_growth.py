"""Entry growth of (h0, rho_1) under random Nielsen moves, and how far exact replay reaches.

    python3 scripts/nielsen_growth.py --sequences 200 --seed 0
"""

import argparse

import numpy as np

from mcgpairs.nielsen import GeneratingPair, apply_move, check_move_sequence, random_moves


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sequences", type=int, default=200)
    ap.add_argument("--length", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--exact-bits", type=int, default=256)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    pair = GeneratingPair.h0_rho(1).matrices()

    # bits after k moves along one long sequence
    cur = pair
    for k, mv in enumerate(random_moves(rng, 60), 1):
        cur = apply_move(cur, mv)
        if k % 10 == 0:
            print(f"after {k} moves: max entry bits {max(M.max_bits() for M in cur)}")

    prefixes, ok = [], 0
    for _ in range(args.sequences):
        res = check_move_sequence(pair, random_moves(rng, int(rng.integers(1, args.length + 1))),
                                  exact_bits=args.exact_bits)
        prefixes.append(res.exact_moves / res.moves)
        ok += res.ok
    print(f"{ok}/{args.sequences} sequences keep the invariant; exact replay covers "
          f"{100 * np.mean(prefixes):.1f}% of moves on average at {args.exact_bits} bits")


if __name__ == "__main__":
    main()
