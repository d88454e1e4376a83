"""Block char polys of [h0, rho_m] on R_1..R_6 for a range of m.

    python3 scripts/prop3_table.py --genus 8 --m-max 10
"""

import argparse

from mcgpairs.charpoly import poly_str
from mcgpairs.nielsen import r2_formula_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genus", type=int, default=8)
    ap.add_argument("--m-max", type=int, default=10)
    args = ap.parse_args()
    labels = None
    for m in range(1, args.m_max + 1):
        rep = r2_formula_check(m, args.genus)
        if labels is None:
            labels = list(rep.blocks)
            print("m | " + " | ".join(labels) + " | R2 trace, det")
        cells = [poly_str(rep.blocks[k], "x") for k in labels]
        print(f"{m} | " + " | ".join(cells) + f" | {rep.r2_trace}, {rep.r2_det}")


if __name__ == "__main__":
    main()
