#!/usr/bin/env python3
"""Tabulate a Wigner function, exhibit its negativity, and check that
its line integrals reproduce the quadrature densities."""

import math

import numpy as np

from quadsuite import (
    number_state,
    pure_state,
    quadrature_density,
    radon,
    wigner,
    wigner_grid,
)

BAR = "-" * 72


def main():
    print(BAR)
    print("Wigner function of the one-photon state along the q axis")
    print(BAR)
    one = number_state(1, 16)
    qs = np.linspace(0.0, 2.0, 5)
    vals = wigner(one, (qs, np.zeros_like(qs)))
    for q, w in zip(qs, vals):
        print(f"W({q:4.2f}, 0) = {w:+.6f}")
    print(f"The origin value {vals[0]:+.6f} is the negative extreme "
          f"-1/pi = {-1.0 / math.pi:+.6f}.\n")

    print(BAR)
    print("Line integrals of the Wigner grid vs quadrature densities")
    print(BAR)
    c = np.array([0.6, -0.4 + 0.5j, 0.3, 0.0, 0.2j])
    state = pure_state(c / np.linalg.norm(c), 12)
    grid = wigner_grid(state)
    xs = np.linspace(-2.0, 2.0, 5)
    for theta in (0.0, math.pi / 4, 2.0):
        sliced = radon(grid, theta, xs)
        direct = quadrature_density(state, theta, xs)
        gap = np.max(np.abs(sliced - direct))
        print(f"theta = {theta:5.3f}: max |slice - density| = {gap:.2e}")
    print("\nEvery quadrature distribution is a shadow of one plane "
          "function,\nwhich is what makes the angle-indexed family "
          "informationally complete.")


if __name__ == "__main__":
    main()
