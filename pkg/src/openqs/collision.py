"""Switch with an open control: a thermal collisional environment acting on C.

Two independent routes to the joint ``S x C`` state after ``n`` collisions:

* :func:`simulate` / :func:`collide_once` evolve ``S x C x E`` with the exact
  unitary ``exp(-i tau H_tot)`` and a fresh thermal ancilla each step;
* :func:`analytic_state` writes the state down from the switch operators
  ``A_xy`` and the scalar coefficients of :func:`b_coefficients`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import kernels
from .channels import KrausChannel
from .linalg import (
    I2,
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    dagger,
    expm_hermitian,
    is_hermitian,
    ketbra,
    partial_trace,
    tensor,
)
from .switch import (
    Outcome,
    PostSelection,
    SwitchDecomposition,
    joint_from_blocks,
    project_control,
    switch_state,
)

GT_LIMIT = 0.5
GT_WARN = 0.25


@dataclass(frozen=True, eq=False)
class CollisionParams:
    """Physical parameters of the control-environment collisions.

    ``H_C = H_E = -omega sigma_x / 2`` and ``V_CE = g/2 (Z Z + Y Y)``.
    ``beta_e = math.inf`` selects a zero-temperature bath exactly.
    """

    omega: float
    g: float
    tau: float
    beta_e: float
    n: int = 0
    h_s: np.ndarray = field(default_factory=lambda: np.zeros((2, 2), dtype=complex))

    def __post_init__(self):
        h_s = np.array(self.h_s, dtype=complex)
        if not is_hermitian(h_s, 1e-12):
            raise ValueError("h_s must be Hermitian")
        object.__setattr__(self, "h_s", h_s)
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if self.g < 0 or self.tau <= 0:
            raise ValueError(f"need g >= 0 and tau > 0, got g={self.g}, tau={self.tau}")
        if not self.beta_e >= 0:
            raise ValueError(f"beta_e must be non-negative, got {self.beta_e}")
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.gt >= GT_LIMIT:
            raise ValueError(f"g*tau = {self.gt} is outside the collisional regime (< {GT_LIMIT})")
        if self.gt > GT_WARN:
            warnings.warn(f"g*tau = {self.gt} is not small; collisional picture is marginal",
                          stacklevel=3)

    @property
    def gt(self) -> float:
        return self.g * self.tau

    @property
    def d_s(self) -> int:
        return self.h_s.shape[0]

    @property
    def f_e(self) -> float:
        if math.isinf(self.beta_e):
            return 1.0
        return math.tanh(self.beta_e * self.omega / 2)

    def with_n(self, n: int) -> "CollisionParams":
        return replace(self, n=n)


def thermal_qubit(beta: float, omega: float, axis: str = "x") -> np.ndarray:
    """Gibbs state of ``-omega sigma_axis / 2``; ``beta = inf`` gives the ground state."""
    f = 1.0 if math.isinf(beta) else math.tanh(beta * omega / 2)
    if axis == "x":
        ground, excited = KET_PLUS, KET_MINUS
    elif axis == "z":
        ground, excited = KET_0, KET_1
    else:
        raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")
    return 0.5 * (1 + f) * ketbra(ground) + 0.5 * (1 - f) * ketbra(excited)


def control_hamiltonian(omega: float) -> np.ndarray:
    return -0.5 * omega * SIGMA_X


def interaction(g: float) -> np.ndarray:
    return 0.5 * g * (tensor(SIGMA_Z, SIGMA_Z) + tensor(SIGMA_Y, SIGMA_Y))


def total_hamiltonian(p: CollisionParams) -> np.ndarray:
    """``H_S + H_C + H_E + V_CE`` on ``S x C x E``."""
    h_c = control_hamiltonian(p.omega)
    h_ce = tensor(h_c, I2) + tensor(I2, h_c) + interaction(p.g)
    return tensor(p.h_s, np.eye(4)) + tensor(np.eye(p.d_s), h_ce)


def collision_unitary(p: CollisionParams) -> np.ndarray:
    return expm_hermitian(total_hamiltonian(p), -1j * p.tau)


class Provenance(str, Enum):
    BRUTE_FORCE = "brute_force"
    ANALYTIC = "analytic"


@dataclass(frozen=True, eq=False)
class OpenSwitchState:
    joint: np.ndarray
    n: int
    provenance: Provenance

    @property
    def d_s(self) -> int:
        return self.joint.shape[0] // 2

    def control(self) -> np.ndarray:
        return partial_trace(self.joint, [self.d_s, 2], [1])

    def system(self) -> np.ndarray:
        return partial_trace(self.joint, [self.d_s, 2], [0])


def initial_state(m: KrausChannel, n: KrausChannel, rho_s: np.ndarray) -> OpenSwitchState:
    """Switched state with control ``|+><+|``, before any collision."""
    return OpenSwitchState(switch_state(m, n, rho_s), 0, Provenance.BRUTE_FORCE)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Brute-force collision history: ``states[k]`` is the ``SC`` state after ``k`` collisions."""

    states: np.ndarray
    ancillas: np.ndarray
    params: CollisionParams
    start: int = 0

    def __len__(self) -> int:
        return self.states.shape[0]

    def at(self, n: int) -> OpenSwitchState:
        return OpenSwitchState(self.states[n - self.start], n, Provenance.BRUTE_FORCE)

    def control_energies(self) -> np.ndarray:
        """``tr(rho_C^k H_C)`` for every recorded step."""
        d_s = self.params.d_s
        h_c = control_hamiltonian(self.params.omega)
        r = self.states.reshape(-1, d_s, 2, d_s, 2)
        rho_c = np.einsum("kiaib->kab", r)
        return np.einsum("kab,ba->k", rho_c, h_c).real

    def ancilla_energy_changes(self) -> np.ndarray:
        """Energy gained by each outgoing ancilla, ``tr((rho_E' - Theta_E) H_E)``."""
        h_e = control_hamiltonian(self.params.omega)
        theta = thermal_qubit(self.params.beta_e, self.params.omega, "x")
        return np.einsum("kab,ba->k", self.ancillas - theta, h_e).real


def simulate(start: OpenSwitchState, p: CollisionParams, steps: int | None = None,
             backend: str | None = None) -> Trajectory:
    """Run ``steps`` collisions (default ``p.n``) from ``start``."""
    if start.provenance is not Provenance.BRUTE_FORCE:
        raise ValueError("collisions must start from a brute-force state")
    if start.d_s != p.d_s:
        raise ValueError(f"state is for d_s={start.d_s} but h_s has dimension {p.d_s}")
    steps = p.n if steps is None else steps
    u = collision_unitary(p)
    theta = thermal_qubit(p.beta_e, p.omega, "x")
    states, ancillas = kernels.collide_trajectory(start.joint, u, theta, steps, backend=backend)
    return Trajectory(states, ancillas, p, start.n)


def collide_once(state: OpenSwitchState, p: CollisionParams) -> OpenSwitchState:
    """One collision: append ``Theta_E``, evolve ``S x C x E`` exactly, trace out ``E``."""
    return simulate(state, p, 1).at(state.n + 1)


@dataclass(frozen=True)
class BCoefficients:
    b_def_plus: float
    b_def_minus: float
    b_indef_plus: float
    b_indef_minus: float
    f_e: float

    def b_def(self, outcome: Outcome) -> float:
        return self.b_def_plus if Outcome(outcome) is Outcome.PLUS else self.b_def_minus

    def b_indef(self, outcome: Outcome) -> float:
        return self.b_indef_plus if Outcome(outcome) is Outcome.PLUS else self.b_indef_minus


def b_coefficients(p: CollisionParams) -> BCoefficients:
    """Weights of the definite and indefinite-order parts after ``p.n`` collisions."""
    c2n = math.cos(p.gt) ** (2 * p.n)
    f = p.f_e
    # grouped so that f = 1 leaves b_def_minus = c2n exactly (no cancellation)
    return BCoefficients((1 + f) - f * c2n, (1 - f) + f * c2n, c2n, -c2n, f)


def system_propagator(p: CollisionParams, n: int | None = None) -> np.ndarray:
    """``U_S^n = exp(-i n tau H_S)``."""
    n = p.n if n is None else n
    return expm_hermitian(p.h_s, -1j * p.tau * n)


def evolved_blocks(dec: SwitchDecomposition, p: CollisionParams) -> dict[tuple[Outcome, Outcome], np.ndarray]:
    """The operators ``B_xy(n)`` replacing ``A_xy`` in the joint state."""
    u = system_propagator(p)
    ud = dagger(u)
    a_def = u @ dec.a_def @ ud
    a_indef = u @ dec.a_indef @ ud
    b = b_coefficients(p)
    plus, minus = Outcome.PLUS, Outcome.MINUS
    b_pm = np.exp(1j * p.n * p.tau * p.omega) * math.cos(p.gt) ** p.n * (u @ dec.a_pm @ ud)
    return {
        (plus, plus): 0.5 * b.b_def_plus * a_def + 0.5 * b.b_indef_plus * a_indef,
        (plus, minus): b_pm,
        (minus, plus): dagger(b_pm),
        (minus, minus): 0.5 * b.b_def_minus * a_def + 0.5 * b.b_indef_minus * a_indef,
    }


def analytic_state(dec: SwitchDecomposition, p: CollisionParams) -> OpenSwitchState:
    return OpenSwitchState(joint_from_blocks(evolved_blocks(dec, p)), p.n, Provenance.ANALYTIC)


def analytic_trajectory(dec: SwitchDecomposition, p: CollisionParams,
                        n_max: int | None = None) -> np.ndarray:
    """Closed-form joint states for ``n = 0 .. n_max`` stacked along axis 0."""
    n_max = p.n if n_max is None else n_max
    ks = np.arange(n_max + 1)
    w, v = np.linalg.eigh(p.h_s)
    phases = np.exp(-1j * p.tau * np.outer(ks, w))
    u = np.einsum("ij,kj,lj->kil", v, phases, v.conj())
    ud = np.conj(np.swapaxes(u, 1, 2))
    evolve = lambda a: u @ a @ ud  # noqa: E731
    a_def, a_indef, a_pm = evolve(dec.a_def), evolve(dec.a_indef), evolve(dec.a_pm)
    c = math.cos(p.gt)
    c2n = c ** (2 * ks)
    f = p.f_e
    b_pp = 0.5 * ((1 + f) - f * c2n)[:, None, None] * a_def + 0.5 * c2n[:, None, None] * a_indef
    b_mm = 0.5 * ((1 - f) + f * c2n)[:, None, None] * a_def - 0.5 * c2n[:, None, None] * a_indef
    b_pm = (np.exp(1j * ks * p.tau * p.omega) * c ** ks)[:, None, None] * a_pm
    b_mp = np.conj(np.swapaxes(b_pm, 1, 2))
    plus, minus = ketbra(KET_PLUS), ketbra(KET_MINUS)
    pm, mp = ketbra(KET_PLUS, KET_MINUS), ketbra(KET_MINUS, KET_PLUS)
    d = dec.dim
    out = (np.einsum("kij,ab->kiajb", b_pp, plus) + np.einsum("kij,ab->kiajb", b_mm, minus)
           + np.einsum("kij,ab->kiajb", b_pm, pm) + np.einsum("kij,ab->kiajb", b_mp, mp))
    return out.reshape(n_max + 1, 2 * d, 2 * d)


def post_selection_probability(dec: SwitchDecomposition, p: CollisionParams,
                               outcome: Outcome | str) -> float:
    b = b_coefficients(p)
    outcome = Outcome(outcome)
    return 0.5 * (b.b_def(outcome) + b.b_indef(outcome) * float(np.trace(dec.a_indef).real))


def post_select_open(source: OpenSwitchState | SwitchDecomposition, p: CollisionParams,
                     outcome: Outcome | str) -> PostSelection:
    """Post-select the control after ``p.n`` collisions.

    ``source`` may be a joint state (projected directly) or a switch
    decomposition (closed form).
    """
    outcome = Outcome(outcome)
    if isinstance(source, OpenSwitchState):
        return project_control(source.joint, outcome, source.d_s)
    block = evolved_blocks(source, p)[(outcome, outcome)]
    return PostSelection(outcome, post_selection_probability(source, p, outcome), block)
