"""Fundamental functions phi_l and phi_u for several gauges, side by side."""

import argparse

from greedylab.norms import Gauge, SpaceSpec, democracy_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=8)
    ap.add_argument("--space", default="lorentz:inf")
    args = ap.parse_args()
    space = SpaceSpec.parse(args.space)
    kinds = ("lorentz", "B", "A", "B-comb", "A-comb")
    profiles = {k: democracy_profile(Gauge(k, space if k != "B" and k != "A" else None), args.m_max, args.m_max) for k in kinds}
    print("m," + ",".join(f"{k}_l,{k}_u" for k in kinds))
    for i in range(args.m_max):
        cells = []
        for k in kinds:
            p = profiles[k]
            cells += [str(p.lower[i]), str(p.upper[i])]
        print(f"{i + 1}," + ",".join(cells))


if __name__ == "__main__":
    main()
