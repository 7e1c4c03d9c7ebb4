"""Certified UCC data for the alternating indicator of [1, m].

Prints one CSV row per m: the harmonic mass s_m, the largest cyclic atom norm D,
the cyclic upper bound, D m / s_m, and the ratio floor(m/2) / upper.
"""

import argparse
import time

from greedylab.envelope import ucc_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    args = ap.parse_args()
    print("m,s_m,D,upper,bound,ratio,seconds")
    for m in args.ms:
        t0 = time.perf_counter()
        w = ucc_witness(m)
        dt = time.perf_counter() - t0
        upper = w["upper_alt"].value
        print(
            f"{m},{float(w['s_m']):.6f},{float(w['D'].value):.6f},"
            f"{float(upper):.6f},{float(w['bound'].value):.6f},{(m // 2) / float(upper):.6f},{dt:.2f}"
        )


if __name__ == "__main__":
    main()
