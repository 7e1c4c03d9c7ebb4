"""B norms of the h0 truncations for both presets, with the (3/2)^K reference."""

import argparse
from fractions import Fraction

from greedylab.constructions import H0Params, build_h0
from greedylab.norms import norm_B


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-a", type=int, default=6)
    ap.add_argument("--max-b", type=int, default=7)
    args = ap.parse_args()
    print("preset,K,size,norm_B,float,reference")
    for preset, top in (("A", args.max_a), ("B", args.max_b)):
        for K in range(1, top + 1):
            h0, _ = build_h0(H0Params.named(preset, K), K)
            v = norm_B(h0)
            ref = float(Fraction(3, 2) ** K) if preset == "A" else 1.5
            print(f"{preset},{K},{len(h0)},{v},{float(v):.6f},{ref:.6f}")


if __name__ == "__main__":
    main()
