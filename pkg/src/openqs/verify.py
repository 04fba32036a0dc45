"""Self-verification: closed forms against the brute-force collision simulator."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import random_channel
from .collision import (
    CollisionParams,
    analytic_trajectory,
    b_coefficients,
    control_hamiltonian,
    initial_state,
    interaction,
    simulate,
)
from .linalg import I2, SIGMA_X, SIGMA_Z, random_density_matrix, tensor
from .switch import decompose
from .thermo import heat_to_control, trajectory_heat

GT_GRID = (0.05, 0.1, 0.2)
BETA_GRID = (0.0, 0.5, 1.0, 10.0)
OMEGA_GRID = (0.5, 1.0, 2.0)
HS_GRID = ("zero", "z", "x")

ORACLE_BOUND = 1e-8
HEAT_BOUND = 1e-8
FIRST_LAW_BOUND = 1e-10
ENTROPY_FLOOR = -1e-9


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    bound: float
    passed: bool


def system_hamiltonian(kind: str, omega_s: float = 1.0) -> np.ndarray:
    if kind == "zero":
        return np.zeros((2, 2), dtype=complex)
    if kind == "z":
        return -0.5 * omega_s * SIGMA_Z
    if kind == "x":
        return -0.5 * omega_s * SIGMA_X
    raise ValueError(f"unknown system Hamiltonian {kind!r}")


def random_pair(rng: np.random.Generator, d: int = 2):
    m = random_channel(d, int(rng.integers(1, 4)), rng)
    n = random_channel(d, int(rng.integers(1, 4)), rng)
    return m, n, random_density_matrix(d, rng)


def stacked_entropy(states: np.ndarray) -> np.ndarray:
    """Von Neumann entropies (nats) of a stack of density matrices."""
    w = np.clip(np.linalg.eigvalsh(states), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0.0, -w * np.log(w), 0.0)
    return terms.sum(axis=1)


@dataclass
class PairResult:
    worst_state: float = 0.0
    worst_heat: float = 0.0
    worst_first_law: float = 0.0
    min_entropy_production: float = math.inf


def _check_pair(seed_seq: np.random.SeedSequence, n_max: int, tau: float) -> PairResult:
    rng = np.random.default_rng(seed_seq)
    m, n, rho = random_pair(rng)
    dec = decompose(m, n, rho)
    start = initial_state(m, n, rho)
    res = PairResult()
    for gt, beta, omega, hs in itertools.product(GT_GRID, BETA_GRID, OMEGA_GRID, HS_GRID):
        p = CollisionParams(omega, gt / tau, tau, beta, n_max, h_s=system_hamiltonian(hs))
        traj = simulate(start, p)
        exact = analytic_trajectory(dec, p)
        diff = np.linalg.eigvalsh(exact - traj.states)
        res.worst_state = max(res.worst_state, float(np.max(0.5 * np.sum(np.abs(diff), axis=1))))
        heats = trajectory_heat(traj)
        closed = np.array([heat_to_control(dec, p.with_n(k)) for k in range(n_max + 1)])
        res.worst_heat = max(res.worst_heat, float(np.max(np.abs(closed - heats))))
        d_uc = np.diff(traj.control_energies())
        d_ue = traj.ancilla_energy_changes()
        res.worst_first_law = max(res.worst_first_law, float(np.max(np.abs(d_uc + d_ue))))
        entropies = stacked_entropy(traj.states)
        sigma = (entropies - entropies[0]) - beta * heats
        res.min_entropy_production = min(res.min_entropy_production, float(np.min(sigma)))
    return res


def oracle_sweep(seed: int = 0, pairs: int = 50, n_max: int = 50, tau: float = 1.0,
                 threads: int = 1) -> PairResult:
    """Worst-case discrepancies over random channel pairs times the parameter grid."""
    seqs = np.random.SeedSequence(seed).spawn(pairs)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda s: _check_pair(s, n_max, tau), seqs))
    total = PairResult()
    for r in results:
        total.worst_state = max(total.worst_state, r.worst_state)
        total.worst_heat = max(total.worst_heat, r.worst_heat)
        total.worst_first_law = max(total.worst_first_law, r.worst_first_law)
        total.min_entropy_production = min(total.min_entropy_production, r.min_entropy_production)
    return total


def structural_checks() -> list[Check]:
    h = tensor(control_hamiltonian(1.0), I2) + tensor(I2, control_hamiltonian(1.0))
    comm = float(np.linalg.norm(h @ interaction(1.0) - interaction(1.0) @ h))
    gaps = []
    prev = 1.0
    for k in range(1, 201):
        cur = abs(b_coefficients(CollisionParams(1.0, 0.2, 1.0, 0.0, k)).b_indef_plus)
        gaps.append(prev - cur)
        prev = cur
    return [
        Check("strict_energy_conservation", comm, 1e-12, comm < 1e-12),
        Check("b_indef_strictly_decreasing", float(min(gaps)), 0.0, min(gaps) > 0.0),
    ]


def run_all(seed: int = 0, pairs: int = 50, n_max: int = 50, threads: int = 1) -> list[Check]:
    sweep = oracle_sweep(seed, pairs, n_max, threads=threads)
    checks = [
        Check("oracle_trace_distance", sweep.worst_state, ORACLE_BOUND,
              sweep.worst_state <= ORACLE_BOUND),
        Check("heat_closed_form_vs_simulation", sweep.worst_heat, HEAT_BOUND,
              sweep.worst_heat <= HEAT_BOUND),
        Check("first_law_per_collision", sweep.worst_first_law, FIRST_LAW_BOUND,
              sweep.worst_first_law <= FIRST_LAW_BOUND),
        Check("entropy_production_min", sweep.min_entropy_production, ENTROPY_FLOOR,
              sweep.min_entropy_production >= ENTROPY_FLOOR),
    ]
    return checks + structural_checks()
