#!/usr/bin/env python3
"""Demonstrate moment deconvolution: a sequential pair of smeared
quadrature measurements still determines the sharp moment sequences."""

import math

from quadsuite import number_state, sequential_demo

BAR = "-" * 72


def main():
    state = number_state(1, 16)
    theta = math.pi / 3

    print(BAR)
    print("Sequential smeared measurement of Q then Q_theta, one photon")
    print(BAR)
    rep = sequential_demo(state, theta, mu_var=0.4, nu_var=0.2, k_max=8)
    for label, chan in rep["channels"].items():
        print(f"\nchannel {label}:")
        print("  k   truth        smeared      recovered")
        rows = zip(chan["ground_truth"], chan["smeared"], chan["recovered"])
        for k, (t, s, r) in enumerate(rows):
            print(f"  {k}  {t:+.6f}   {s:+.6f}   {r:+.6f}")
        print(f"  worst relative error: {chan['max_rel_error']:.2e}")

    print()
    print(BAR)
    print("Recovery is exact whatever the smearing strength")
    print(BAR)
    for var in (0.1, 0.5, 2.0):
        rep = sequential_demo(state, theta, var, var, k_max=12)
        print(f"variance {var:3.1f}: worst relative error "
              f"{rep['max_rel_error']:.2e}")
    print("The smearing only mixes lower-order moments into higher ones,")
    print("so a triangular pass undoes it order by order.")


if __name__ == "__main__":
    main()
