"""Time the compiled and numpy collision loops on the same trajectories.

    python3 benchmarks/bench_kernels.py [--steps 2000] [--repeat 5]

Reports the best wall time per backend and the largest state discrepancy
between them.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from openqs.channels import random_channel
from openqs.collision import CollisionParams, collision_unitary, initial_state, thermal_qubit
from openqs.kernels import available_backends, collide_trajectory
from openqs.linalg import SIGMA_Z, random_density_matrix


def case(d: int, rng: np.random.Generator):
    m, n = random_channel(d, 2, rng), random_channel(d, 2, rng)
    rho0 = initial_state(m, n, random_density_matrix(d, rng)).joint
    h_s = np.zeros((d, d), complex)
    h_s[:2, :2] = -0.5 * SIGMA_Z
    p = CollisionParams(1.0, 0.2, 1.0, 1.0, h_s=h_s)
    return rho0, collision_unitary(p), thermal_qubit(p.beta_e, p.omega)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()

    backends = available_backends()
    rng = np.random.default_rng(1)
    print(f"{'d_S':>4} {'steps':>6} " + " ".join(f"{b:>12}" for b in backends) + "   speedup   max|diff|")
    for d in args.dims:
        rho0, u, anc = case(d, rng)
        best = {}
        out = {}
        for b in backends:
            out[b] = collide_trajectory(rho0, u, anc, args.steps, backend=b)[0]
            t = timeit.repeat(lambda: collide_trajectory(rho0, u, anc, args.steps, backend=b),
                              number=1, repeat=args.repeat)
            best[b] = min(t)
        cols = " ".join(f"{best[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in best:
            speed = best["numpy"] / best["cython"]
            diff = float(np.max(np.abs(out["numpy"] - out["cython"])))
            print(f"{d:>4} {args.steps:>6} {cols} {speed:8.1f}x   {diff:.1e}")
        else:
            print(f"{d:>4} {args.steps:>6} {cols}   (compiled backend not built)")


if __name__ == "__main__":
    main()
