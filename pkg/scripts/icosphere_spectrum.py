#!/usr/bin/env python3
"""Compute the smallest Laplace-Beltrami eigenvalues on an icosphere and
compare the clusters with the analytic l(l+1) levels."""

import argparse

import numpy as np

import modeiso as mi
from modeiso.pattern_metrics import cluster_spectrum


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--refinement", type=int, default=3)
    parser.add_argument("--count", type=int, default=31)
    args = parser.parse_args()

    mesh = mi.generate_icosphere(args.refinement)
    M, A = mi.assemble_mass(mesh), mi.assemble_stiffness(mesh)
    spec = mi.smallest_eigenpairs(A, M, count=args.count, tol=1e-9, seed=0)
    print(f"icosphere({args.refinement}): {mesh.n_vertices} vertices")
    print(f"{'cluster':>8} {'size':>5} {'mean':>10} {'l(l+1)':>8} {'err':>8}")
    for level, cluster in enumerate(cluster_spectrum(spec.eigenvalues)):
        mean = float(np.mean(spec.eigenvalues[cluster]))
        exact = level * (level + 1)
        err = "-" if exact == 0 else f"{100 * (mean - exact) / exact:.2f}%"
        print(f"{level:>8} {len(cluster):>5} {mean:>10.4f} {exact:>8} "
              f"{err:>8}")


if __name__ == "__main__":
    main()
