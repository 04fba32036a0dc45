"""Switch-powered qubit refrigerator with an open control.

The working qubit has ``H_S = -omega_s sigma_z / 2`` and starts thermal at
``beta_cold``; both switched channels thermalise it to ``beta_cold``. After
``n`` collisions of the control with a bath at ``beta_e`` the control is
measured in the +/- basis: ``+`` rethermalises to cold, ``-`` goes through a
hot then a cold bath. Register erasure is paid at ``beta_hot``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channels import fridge_kraus
from .collision import (
    BCoefficients,
    CollisionParams,
    OpenSwitchState,
    Provenance,
    b_coefficients,
    initial_state,
    simulate,
    thermal_qubit,
)
from .linalg import SIGMA_X, SIGMA_Z, tensor
from .switch import Outcome

COP_WORK_FLOOR = 1e-15
P_FLOOR = 1e-12


def _sech2(x: float) -> float:
    return 1.0 / math.cosh(x) ** 2


@dataclass(frozen=True)
class FridgeParams:
    omega_s: float = 1.0
    omega: float = 1.0
    beta_hot: float = 1.0
    beta_cold: float = 1.5
    g: float = 1.0
    tau: float = 0.1
    n: int = 0
    beta_e: float = 0.0

    def __post_init__(self):
        if self.omega_s <= 0:
            raise ValueError(f"omega_s must be positive, got {self.omega_s}")
        if self.beta_hot <= 0 or self.beta_cold <= 0:
            raise ValueError("bath inverse temperatures must be positive")
        if self.beta_cold < self.beta_hot:
            raise ValueError(
                f"beta_cold ({self.beta_cold}) must not be below beta_hot ({self.beta_hot})"
            )

    def collision(self) -> CollisionParams:
        return CollisionParams(self.omega, self.g, self.tau, self.beta_e, self.n,
                               h_s=-0.5 * self.omega_s * SIGMA_Z)

    def with_(self, **kw) -> "FridgeParams":
        return replace(self, **kw)

    @property
    def h_s(self) -> np.ndarray:
        return -0.5 * self.omega_s * SIGMA_Z

    @property
    def theta_cold(self) -> np.ndarray:
        return thermal_qubit(self.beta_cold, self.omega_s, "z")

    @property
    def theta_hot(self) -> np.ndarray:
        return thermal_qubit(self.beta_hot, self.omega_s, "z")

    @property
    def tr_theta_cubed(self) -> float:
        """``tr(Theta_cold^3) = 1 - 3/4 sech^2(beta_cold omega_s / 2)``, equal to ``tr A_indef``."""
        return 1.0 - 0.75 * _sech2(0.5 * self.beta_cold * self.omega_s)


def fridge_joint_state(fp: FridgeParams) -> OpenSwitchState:
    """Closed-form ``S x C`` state after the switch and ``fp.n`` collisions."""
    b = b_coefficients(fp.collision())
    theta = fp.theta_cold
    theta3 = theta @ theta @ theta
    joint = (0.5 * tensor(theta, np.eye(2) + (1.0 - b.b_def_minus) * SIGMA_X)
             - 0.5 * b.b_indef_minus * tensor(theta3, SIGMA_X))
    return OpenSwitchState(joint, fp.n, Provenance.ANALYTIC)


def fridge_pipeline_state(fp: FridgeParams, backend: str | None = None) -> OpenSwitchState:
    """Same state via the generic switch of ``fridge_kraus`` plus simulated collisions."""
    ch = fridge_kraus(fp.theta_cold)
    start = initial_state(ch, ch, fp.theta_cold)
    return simulate(start, fp.collision(), backend=backend).at(fp.n)


def _probabilities(b: BCoefficients, tr_a_indef: float) -> tuple[float, float]:
    p_plus = 0.5 * (b.b_def_plus + b.b_indef_plus * tr_a_indef)
    p_minus = 0.5 * (b.b_def_minus + b.b_indef_minus * tr_a_indef)
    return p_plus, p_minus


def conditional_system_state(fp: FridgeParams, outcome: Outcome | str) -> np.ndarray:
    """``Theta/(2p) [b_def + b_indef Theta^2]`` for the chosen outcome."""
    outcome = Outcome(outcome)
    b = b_coefficients(fp.collision())
    p = _probabilities(b, fp.tr_theta_cubed)[0 if outcome is Outcome.PLUS else 1]
    if p <= P_FLOOR:
        raise ValueError(f"outcome {outcome.value} has probability {p:.3e}")
    theta = fp.theta_cold
    return theta @ (b.b_def(outcome) * np.eye(2) + b.b_indef(outcome) * theta @ theta) / (2 * p)


def heat_minus_branch(fp: FridgeParams) -> float:
    """Cold-bath heat of one cycle in the ``-`` branch, closed form."""
    b = b_coefficients(fp.collision())
    p_minus = _probabilities(b, fp.tr_theta_cubed)[1]
    x_c = 0.5 * fp.beta_cold * fp.omega_s
    x_h = 0.5 * fp.beta_hot * fp.omega_s
    return (-fp.omega_s * b.b_indef_minus / (8 * p_minus) * math.tanh(x_c) * _sech2(x_c)
            + 0.5 * fp.omega_s * (math.tanh(x_h) - math.tanh(x_c)))


def branch_heat(fp: FridgeParams, outcome: Outcome | str) -> float:
    """Cold-bath heat of one branch from the energy bookkeeping of its strokes."""
    outcome = Outcome(outcome)
    rho = conditional_system_state(fp, outcome)
    h = fp.h_s
    energy = lambda m: float(np.trace(m @ h).real)  # noqa: E731
    if outcome is Outcome.PLUS:
        return energy(rho - fp.theta_cold) + energy(fp.theta_cold - rho)
    return energy(rho - fp.theta_cold) + energy(fp.theta_cold - fp.theta_hot)


def control_heat_closed_form(fp: FridgeParams) -> float:
    """Heat into the control after ``n`` collisions with the cold bath."""
    cp = fp.collision()
    b = b_coefficients(replace(cp, beta_e=fp.beta_cold))
    s2 = _sech2(0.5 * fp.beta_cold * fp.omega_s)
    w = fp.omega
    return (-0.375 * w * s2 + 0.5 * w * b.b_def_minus
            + 0.5 * w * b.b_indef_minus * (1.0 - 0.75 * s2))


def control_heat(fp: FridgeParams) -> float:
    """``q_n``; the control's bath is the cold bath, so ``beta_e`` must equal ``beta_cold``."""
    if fp.beta_e != fp.beta_cold:
        raise ValueError(
            f"control heat assumes beta_e == beta_cold, got {fp.beta_e} and {fp.beta_cold}"
        )
    return control_heat_closed_form(fp)


def erasure_work(p_plus: float, p_minus: float, beta_reg: float) -> float:
    s = -sum(p * math.log(p) for p in (p_plus, p_minus) if p > 0.0)
    return s / beta_reg


@dataclass(frozen=True)
class CycleReport:
    p_minus: float
    p_plus: float
    q_minus: float | None
    q_plus: float
    avg_heat: float | None
    work_erasure: float
    work_measure_plus: float
    work_measure_minus: float
    cop: float | None
    control_heat: float
    cop_prime: float | None


def cycle_report(fp: FridgeParams) -> CycleReport:
    """Per-cycle averages for ``fp.n`` collisions.

    COP entries are ``None`` when the ``-`` outcome is below the probability
    floor or the erasure work vanishes.
    """
    b = b_coefficients(fp.collision())
    p_plus, p_minus = _probabilities(b, fp.tr_theta_cubed)
    w_er = erasure_work(p_plus, p_minus, fp.beta_hot)
    w_plus = 0.5 * fp.omega * (2 * p_plus - 1 - 1)
    w_minus = 0.5 * fp.omega * (2 * p_plus - 1 + 1)
    q_plus = branch_heat(fp, Outcome.PLUS) if p_plus > P_FLOOR else 0.0
    q_ctrl = control_heat_closed_form(fp)
    q_minus = avg = cop = cop_prime = None
    if p_minus > P_FLOOR:
        q_minus = heat_minus_branch(fp)
        avg = p_minus * q_minus
        if w_er > COP_WORK_FLOOR:
            cop = avg / w_er
            cop_prime = cop + q_ctrl / w_er
    return CycleReport(p_minus, p_plus, q_minus, q_plus, avg, w_er, w_plus, w_minus,
                       cop, q_ctrl, cop_prime)


def q_bar_zero(beta_hot, beta_cold, omega_s: float = 1.0):
    """Average cold-bath heat per cycle with a closed control; vectorised."""
    bh = np.asarray(beta_hot, dtype=float)
    bc = np.asarray(beta_cold, dtype=float)
    num = np.tanh(0.5 * bc * omega_s) - 3.0 * np.tanh(0.5 * bh * omega_s)
    return -omega_s * num / (8.0 * (np.cosh(bc * omega_s) + 1.0))


def refrigeration_region(beta_hot, beta_cold, omega_s: float = 1.0) -> np.ndarray:
    """Mask over the ``(beta_hot, beta_cold)`` grid where a closed-control cycle cools.

    Rows follow ``beta_hot`` and columns ``beta_cold``.
    """
    bh, bc = np.meshgrid(np.asarray(beta_hot, float), np.asarray(beta_cold, float), indexing="ij")
    return (q_bar_zero(bh, bc, omega_s) > 0) & (bc > bh)
