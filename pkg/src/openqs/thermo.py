"""Heat, entropy production and available information for the open switch.

Entropies are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import Observable, apply_channel, dephasing_channel
from .collision import (
    CollisionParams,
    OpenSwitchState,
    Trajectory,
    b_coefficients,
    control_hamiltonian,
)
from .linalg import von_neumann_entropy
from .switch import SwitchDecomposition

HEAT_ZERO_TOL = 1e-12


def heat_to_control(dec: SwitchDecomposition, p: CollisionParams) -> float:
    """Total heat the control has absorbed from the bath after ``p.n`` collisions."""
    return heat_from_indef_trace(float(np.trace(dec.a_indef).real), p)


def heat_from_indef_trace(tr_a_indef: float, p: CollisionParams) -> float:
    b = b_coefficients(p)
    return 0.5 * p.omega * ((b.b_def_minus - 1.0) + (b.b_indef_minus + 1.0) * tr_a_indef)


def control_energy(state: OpenSwitchState, omega: float) -> float:
    return float(np.trace(state.control() @ control_hamiltonian(omega)).real)


def trajectory_heat(traj: Trajectory) -> np.ndarray:
    """Heat into the control after each recorded step, from the simulated states."""
    e = traj.control_energies()
    return e - e[0]


@dataclass(frozen=True)
class ThermoReport:
    heat_to_control: float
    entropy_change: float
    entropy_flux: float
    entropy_production: float


def entropy_production(initial: OpenSwitchState, final: OpenSwitchState,
                       p: CollisionParams) -> ThermoReport:
    """Entropy production of ``SC`` between two states of one trajectory.

    ``Sigma = Delta S_SC - beta_E Q_CE`` with ``Q_CE`` read off the control
    marginals. A zero-temperature bath with zero heat gives zero flux.
    """
    heat = control_energy(final, p.omega) - control_energy(initial, p.omega)
    ds = von_neumann_entropy(final.joint) - von_neumann_entropy(initial.joint)
    if math.isinf(p.beta_e):
        flux = 0.0 if abs(heat) <= HEAT_ZERO_TOL else math.copysign(math.inf, heat)
    else:
        flux = p.beta_e * heat
    return ThermoReport(heat, ds, flux, ds - flux)


def available_information(rho: np.ndarray) -> float:
    """``ln d - S(rho)``."""
    rho = np.asarray(rho)
    return math.log(rho.shape[0]) - von_neumann_entropy(rho)


def coherence(rho: np.ndarray, obs: Observable) -> float:
    """Relative entropy of coherence of ``rho`` in the eigenbasis of ``obs``."""
    return von_neumann_entropy(apply_channel(dephasing_channel(obs), rho)) - von_neumann_entropy(rho)
