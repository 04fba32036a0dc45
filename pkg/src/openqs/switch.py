"""Quantum switch of two channels and post-selection of a closed control.

Composite states are ordered system first, control second (``S x C``), and
the control is written in its computational basis ``{|0>, |1>}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channels import KrausChannel
from .linalg import KET_MINUS, KET_PLUS, SIGMA_Z, dagger, ketbra, partial_trace, tensor

PROBABILITY_FLOOR = 1e-12


class Outcome(str, Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def ket(self) -> np.ndarray:
        return KET_PLUS if self is Outcome.PLUS else KET_MINUS

    @property
    def sign(self) -> int:
        return 1 if self is Outcome.PLUS else -1


def _check_pair(m: KrausChannel, n: KrausChannel, rho_s: np.ndarray) -> None:
    if m.dim != n.dim:
        raise ValueError(f"channels act on different dimensions ({m.dim} vs {n.dim})")
    if np.shape(rho_s) != (m.dim, m.dim):
        raise ValueError(f"system state shape {np.shape(rho_s)} does not match channel dim {m.dim}")


def switch_kraus(m: KrausChannel, n: KrausChannel) -> list[np.ndarray]:
    """Controlled Kraus operators ``M_i N_j x |0><0| + N_j M_i x |1><1|``."""
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return [tensor(mi @ nj, p0) + tensor(nj @ mi, p1)
            for mi in m.operators for nj in n.operators]


def switch_state(m: KrausChannel, n: KrausChannel, rho_s: np.ndarray,
                 rho_c: np.ndarray | None = None) -> np.ndarray:
    """Joint system-control state after the switch, summed directly over ``W_ij``.

    ``rho_c`` defaults to ``|+><+|``.
    """
    rho_s = np.asarray(rho_s, dtype=complex)
    _check_pair(m, n, rho_s)
    rho_c = ketbra(KET_PLUS) if rho_c is None else np.asarray(rho_c, dtype=complex)
    if rho_c.shape != (2, 2):
        raise ValueError("the control must be a qubit")
    joint = tensor(rho_s, rho_c)
    return sum(w @ joint @ dagger(w) for w in switch_kraus(m, n))


@dataclass(frozen=True, eq=False)
class SwitchDecomposition:
    """The operators ``A_xy`` with ``x, y in {+, -}``, and their def/indef combinations."""

    a_pp: np.ndarray
    a_pm: np.ndarray
    a_mp: np.ndarray
    a_mm: np.ndarray

    @property
    def a_def(self) -> np.ndarray:
        return self.a_pp + self.a_mm

    @property
    def a_indef(self) -> np.ndarray:
        return self.a_pp - self.a_mm

    @property
    def dim(self) -> int:
        return self.a_pp.shape[0]

    def block(self, x: Outcome, y: Outcome) -> np.ndarray:
        return {
            (Outcome.PLUS, Outcome.PLUS): self.a_pp,
            (Outcome.PLUS, Outcome.MINUS): self.a_pm,
            (Outcome.MINUS, Outcome.PLUS): self.a_mp,
            (Outcome.MINUS, Outcome.MINUS): self.a_mm,
        }[(x, y)]

    def check(self, tol: float = 1e-10) -> None:
        """Raise ``ValueError`` if any structural invariant fails."""
        if abs(np.trace(self.a_def) - 1.0) > tol:
            raise ValueError("tr(A_def) != 1")
        for name, a in (("A_++", self.a_pp), ("A_--", self.a_mm)):
            if np.linalg.eigvalsh(0.5 * (a + dagger(a)))[0] < -tol:
                raise ValueError(f"{name} is not positive semidefinite")
        if np.max(np.abs(self.a_mp - dagger(self.a_pm))) > 1e-12:
            raise ValueError("A_-+ != A_+-^dag")


def decompose(m: KrausChannel, n: KrausChannel, rho_s: np.ndarray) -> SwitchDecomposition:
    """``A_xy = 1/4 sum_ij [M_i, N_j]_x rho [M_i, N_j]_y^dag`` from (anti)commutators."""
    rho_s = np.asarray(rho_s, dtype=complex)
    _check_pair(m, n, rho_s)
    d = m.dim
    a_pp = np.zeros((d, d), dtype=complex)
    a_pm = np.zeros_like(a_pp)
    a_mm = np.zeros_like(a_pp)
    for mi in m.operators:
        for nj in n.operators:
            mn, nm = mi @ nj, nj @ mi
            anti, comm = mn + nm, mn - nm
            anti_rho = anti @ rho_s
            comm_rho = comm @ rho_s
            a_pp += anti_rho @ dagger(anti)
            a_pm += anti_rho @ dagger(comm)
            a_mm += comm_rho @ dagger(comm)
    a_pp /= 4
    a_pm /= 4
    a_mm /= 4
    return SwitchDecomposition(a_pp, a_pm, dagger(a_pm), a_mm)


def assemble_joint(dec: SwitchDecomposition, rho_c: np.ndarray | None = None) -> np.ndarray:
    """Rebuild the switched joint state from the ``A_xy`` for any control state.

    ``A_++ x rho_c + A_+- x rho_c Z + A_-+ x Z rho_c + A_-- x Z rho_c Z``.
    """
    rho_c = ketbra(KET_PLUS) if rho_c is None else np.asarray(rho_c, dtype=complex)
    z = SIGMA_Z
    return (tensor(dec.a_pp, rho_c) + tensor(dec.a_pm, rho_c @ z)
            + tensor(dec.a_mp, z @ rho_c) + tensor(dec.a_mm, z @ rho_c @ z))


def joint_from_blocks(blocks: dict[tuple[Outcome, Outcome], np.ndarray]) -> np.ndarray:
    """``sum_xy B_xy x |x><y|`` with ``|x>`` in the control's +/- basis."""
    return sum(tensor(b, ketbra(x.ket, y.ket)) for (x, y), b in blocks.items())


@dataclass(frozen=True, eq=False)
class PostSelection:
    outcome: Outcome
    probability: float
    unnormalized: np.ndarray

    @property
    def available(self) -> bool:
        return self.probability > PROBABILITY_FLOOR

    @property
    def conditional_state(self) -> np.ndarray:
        """Normalized system state; raises for outcomes below the probability floor."""
        if not self.available:
            raise ValueError(
                f"outcome {self.outcome.value} has probability {self.probability:.3e}; "
                "conditional state is undefined"
            )
        return self.unnormalized / self.probability


def post_select(dec: SwitchDecomposition, outcome: Outcome | str) -> PostSelection:
    outcome = Outcome(outcome)
    a = dec.block(outcome, outcome)
    return PostSelection(outcome, float(np.trace(a).real), a)


def project_control(joint: np.ndarray, outcome: Outcome | str, d_s: int) -> PostSelection:
    """Post-select the control of an ``S x C`` state on ``|+>`` or ``|->``."""
    outcome = Outcome(outcome)
    proj = tensor(np.eye(d_s), ketbra(outcome.ket))
    block = partial_trace(proj @ np.asarray(joint, dtype=complex) @ proj, [d_s, 2], [0])
    return PostSelection(outcome, float(np.trace(block).real), block)


def control_marginal(joint: np.ndarray, d_s: int) -> np.ndarray:
    return partial_trace(joint, [d_s, 2], [1])


def system_marginal(joint: np.ndarray, d_s: int) -> np.ndarray:
    return partial_trace(joint, [d_s, 2], [0])

