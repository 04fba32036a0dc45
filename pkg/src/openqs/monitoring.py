"""Switch of two equal-strength monitorings in mutually unbiased bases."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .channels import (
    OBS_X,
    OBS_Z,
    KrausChannel,
    Observable,
    apply_channel,
    is_mub,
    monitoring_channel,
    mub_overlaps,
)
from .collision import (
    CollisionParams,
    b_coefficients,
    initial_state,
    simulate,
    system_propagator,
)
from .linalg import KET_MINUS, KET_PLUS, SIGMA_X, dagger, ketbra
from .switch import PROBABILITY_FLOOR, Outcome, PostSelection, project_control
from .thermo import available_information


@dataclass(frozen=True, eq=False)
class MonitoringSwitchParams:
    eps: float
    obs: Observable
    obs_prime: Observable
    rho_s: np.ndarray
    collision: CollisionParams

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")
        if not is_mub(self.obs, self.obs_prime):
            raise ValueError(f"{self.obs.name} and {self.obs_prime.name} are not mutually unbiased")
        rho = np.array(self.rho_s, dtype=complex)
        if rho.shape != (self.obs.dim, self.obs.dim):
            raise ValueError("rho_s does not match the observables' dimension")
        if self.collision.d_s != self.obs.dim:
            raise ValueError("collision h_s does not match the observables' dimension")
        object.__setattr__(self, "rho_s", rho)

    @property
    def d_s(self) -> int:
        return self.obs.dim

    def channels(self) -> tuple[KrausChannel, KrausChannel]:
        return monitoring_channel(self.obs, self.eps), monitoring_channel(self.obs_prime, self.eps)

    def with_(self, **kw) -> "MonitoringSwitchParams":
        return replace(self, **kw)


def qubit_params(eps: float, n: int = 0, beta: float = 1.0, omega: float = 1.0,
                 omega_s: float = 1.0, g: float = 1.0, tau: float = 0.2) -> MonitoringSwitchParams:
    """The qubit setup: ``rho_S = |+><+|``, sigma_z/sigma_x monitorings, ``H_S = -omega_s X/2``."""
    cp = CollisionParams(omega, g, tau, beta, n, h_s=-0.5 * omega_s * SIGMA_X)
    return MonitoringSwitchParams(eps, OBS_Z, OBS_X, ketbra(KET_PLUS), cp)


def _phases(params: MonitoringSwitchParams) -> np.ndarray:
    """``exp(i phi_ij)`` defined by ``<o_i|o'_j> = exp(i phi_ij) / sqrt(d)``."""
    return math.sqrt(params.d_s) * mub_overlaps(params.obs, params.obs_prime)


def chi(params: MonitoringSwitchParams) -> complex:
    """Closed-form ``chi``; its real part equals ``tr A_indef`` for the monitoring switch."""
    eps, d = params.eps, params.d_s
    o, op = params.obs.basis(), params.obs_prime.basis()
    # element [j, i] = <o'_j| rho |o_i>
    overlaps = dagger(op) @ params.rho_s @ o
    s = np.sum(_phases(params) * overlaps.T)
    return complex((1 - eps) ** 2 + 2 * eps * (1 - eps) + eps ** 2 / d ** 1.5 * s)


def _probability(params: MonitoringSwitchParams, outcome: Outcome) -> float:
    b = b_coefficients(params.collision)
    return 0.5 * (b.b_def(outcome) + b.b_indef(outcome) * chi(params).real)


def conditional_state_general(params: MonitoringSwitchParams, outcome: Outcome | str) -> PostSelection:
    """Post-selected system state for any dimension, from the MUB closed form."""
    outcome = Outcome(outcome)
    eps, d = params.eps, params.d_s
    b = b_coefficients(params.collision)
    bd, bi = b.b_def(outcome), b.b_indef(outcome)
    u = system_propagator(params.collision)
    ud = dagger(u)
    m, n = params.channels()
    ordered = apply_channel(n, apply_channel(m, params.rho_s))
    o, op = params.obs.basis(), params.obs_prime.basis()
    phase2 = _phases(params) ** 2
    inter = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            k = np.outer(o[:, i], op[:, j].conj())
            inter += phase2[i, j] * (k @ params.rho_s @ k)
    inter = 0.5 * (inter + dagger(inter))
    unnorm = (0.5 * (bd + bi) * (u @ ordered @ ud)
              + eps ** 2 * bi / (2 * d) * (u @ inter @ ud - np.eye(d)))
    return PostSelection(outcome, _probability(params, outcome), unnorm)


def _is_qubit_fast_path(params: MonitoringSwitchParams) -> bool:
    h = params.collision.h_s
    return (params.d_s == 2
            and params.obs.name == OBS_Z.name and params.obs_prime.name == OBS_X.name
            and np.allclose(params.rho_s, ketbra(KET_PLUS), atol=1e-12)
            and np.allclose(h, h[0, 1].real * SIGMA_X + h[0, 0].real * np.eye(2), atol=1e-12))


def conditional_qubit_state(params: MonitoringSwitchParams, outcome: Outcome | str) -> PostSelection:
    """Qubit closed form; the result is diagonal in the system's +/- basis."""
    if not _is_qubit_fast_path(params):
        raise ValueError("qubit closed form needs rho_S=|+><+|, sigma_z then sigma_x, and H_S along x")
    outcome = Outcome(outcome)
    eps = params.eps
    b = b_coefficients(params.collision)
    bd, bi = b.b_def(outcome), b.b_indef(outcome)
    w_plus = 0.5 * (1 - eps / 2) * (bd + bi)
    w_minus = 0.5 * (eps / 2) * (bd + bi * (1 - eps))
    p = 0.5 * (bd + bi * (1 - eps ** 2 / 2))
    return PostSelection(outcome, p, w_plus * ketbra(KET_PLUS) + w_minus * ketbra(KET_MINUS))


def qubit_information(params: MonitoringSwitchParams, outcome: Outcome | str) -> float | None:
    """Scalar closed form of ``ln 2 - S(rho_{S,+-})``; ``None`` below the probability floor."""
    if not _is_qubit_fast_path(params):
        raise ValueError("qubit closed form needs rho_S=|+><+|, sigma_z then sigma_x, and H_S along x")
    outcome = Outcome(outcome)
    eps = params.eps
    b = b_coefficients(params.collision)
    bd, bi = b.b_def(outcome), b.b_indef(outcome)
    p = 0.5 * (bd + bi * (1 - eps ** 2 / 2))
    if p <= PROBABILITY_FLOOR:
        return None
    lam = ((1 - eps / 2) * (bd + bi) / (2 * p), (eps / 2) * (bd + bi * (1 - eps)) / (2 * p))
    return math.log(2) + sum(x * math.log(x) for x in lam if x > 0.0)


def pipeline_conditional_state(params: MonitoringSwitchParams, outcome: Outcome | str,
                               backend: str | None = None) -> PostSelection:
    """Monitorings, switch, simulated collisions and projection of the control."""
    m, n = params.channels()
    traj = simulate(initial_state(m, n, params.rho_s), params.collision, backend=backend)
    return project_control(traj.states[-1], outcome, params.d_s)


def information_curve(eps_grid: Iterable[float], n_list: Iterable[int], beta_list: Iterable[float],
                      outcomes: Iterable[str] = ("plus", "minus"), omega: float = 1.0,
                      omega_s: float = 1.0, g: float = 1.0, tau: float = 0.2) -> list[dict]:
    """Rows ``(eps, n, beta, outcome, p_post, info_nats)`` over the full grid.

    ``info_nats`` is ``None`` where the outcome is below the probability floor.
    """
    rows = []
    for eps in eps_grid:
        for n in n_list:
            for beta in beta_list:
                params = qubit_params(float(eps), int(n), float(beta), omega, omega_s, g, tau)
                for out in outcomes:
                    ps = conditional_qubit_state(params, out)
                    info = (available_information(ps.conditional_state)
                            if ps.probability > PROBABILITY_FLOOR else None)
                    rows.append({"eps": float(eps), "n": int(n), "beta": float(beta),
                                 "outcome": Outcome(out).value, "p_post": ps.probability,
                                 "info_nats": info})
    return rows
