"""Rank-one sanity run: the chebyshev spectrum through the Tauberian harness.

B(x) for A(x) = sum_{n <= e^x} Lambda(n) log n should creep up towards 1,
roughly like 1 - 1/x.
"""

import argparse

from pgtlab import tauberian as tb


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cutoff", type=float, default=13.0)
    args = ap.parse_args()
    cheb = tb.synth_spectrum(tb.SynthSpec(1, 0, "chebyshev", cutoff=args.cutoff))
    radii = [float(x) for x in range(4, int(args.cutoff) + 1)]
    print("x,B,1-1/x")
    for row in tb.wiener_ikehara_verdict(cheb, 0, (1.0,), radii):
        print(f"{row.radius:g},{row.B:.6f},{1 - 1 / row.radius:.6f}")


if __name__ == "__main__":
    main()
