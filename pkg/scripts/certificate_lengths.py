"""Expanded word lengths over {h0, rho} of every generator certificate, as n varies.

    python3 scripts/certificate_lengths.py --genus 8 --n-max 6
"""

import argparse

import numpy as np

from mcgpairs.derivation import generator_words


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genus", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=6)
    args = ap.parse_args()
    table = {}
    for n in range(1, args.n_max + 1):
        for c in generator_words(args.genus, n, second_path=False):
            table.setdefault(c.target, []).append(c.expanded_length)
    print("target | lengths for n = 1.. | second differences")
    for target, seq in table.items():
        second = np.diff(seq, 2).tolist() if len(seq) > 2 else []
        print(f"{target} | {seq} | {second}")


if __name__ == "__main__":
    main()
