"""CPTP maps in Kraus form and the channel families used by the switch."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

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
    ketbra,
    random_unitary,
    sqrtm_psd,
)

COMPLETENESS_TOL = 1e-10


class ChannelError(ValueError):
    """Raised when a Kraus list or observable fails its defining constraints."""


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators.

    Construction checks ``sum_i K_i^dag K_i = 1`` to ``1e-10`` (Frobenius).
    """

    operators: tuple[np.ndarray, ...]
    name: str = field(default="", compare=False)

    def __init__(self, operators: Sequence[np.ndarray], name: str = ""):
        ops = tuple(np.array(k, dtype=complex) for k in operators)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ChannelError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
            k.setflags(write=False)
        err = completeness_error(ops)
        if err > COMPLETENESS_TOL:
            raise ChannelError(f"Kraus operators are not complete (error {err:.3e})")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "name", name)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply_channel(self, rho)

    def __len__(self) -> int:
        return len(self.operators)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Channel that applies ``self`` first and ``other`` second."""
        if other.dim != self.dim:
            raise ChannelError("cannot compose channels of different dimension")
        ops = [b @ a for a in self.operators for b in other.operators]
        return KrausChannel(ops, name=f"{other.name}*{self.name}")


def completeness_error(ops: Sequence[np.ndarray]) -> float:
    d = ops[0].shape[0]
    s = sum(dagger(k) @ k for k in ops)
    return float(np.linalg.norm(s - np.eye(d)))


def apply_channel(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"state of shape {rho.shape} does not fit a {ch.dim}-dim channel")
    return sum(k @ rho @ dagger(k) for k in ch.operators)


@dataclass(frozen=True, eq=False)
class Observable:
    """An observable held as its spectral projectors.

    ``eigenvalues[k]`` belongs to ``projectors[k]``. Degenerate spectra are
    allowed as long as each projector is listed once.
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        projs = tuple(np.array(p, dtype=complex) for p in self.projectors)
        if len(projs) != len(self.eigenvalues):
            raise ChannelError("one eigenvalue is needed per projector")
        d = projs[0].shape[0]
        for a, p in enumerate(projs):
            if np.linalg.norm(p - dagger(p)) > COMPLETENESS_TOL:
                raise ChannelError(f"projector {a} is not Hermitian")
            for b, q in enumerate(projs):
                target = p if a == b else np.zeros_like(p)
                if np.linalg.norm(p @ q - target) > COMPLETENESS_TOL:
                    raise ChannelError(f"projectors {a} and {b} are not orthogonal idempotents")
        if np.linalg.norm(sum(projs) - np.eye(d)) > COMPLETENESS_TOL:
            raise ChannelError("projectors do not resolve the identity")
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "eigenvalues", tuple(float(x) for x in self.eigenvalues))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @classmethod
    def from_basis(cls, basis: np.ndarray, eigenvalues: Sequence[float] | None = None,
                   name: str = "") -> "Observable":
        """Observable whose eigenvectors are the columns of ``basis``."""
        basis = np.asarray(basis, dtype=complex)
        d = basis.shape[1]
        eigenvalues = list(range(d)) if eigenvalues is None else eigenvalues
        return cls(tuple(eigenvalues), tuple(ketbra(basis[:, k]) for k in range(d)), name)

    def matrix(self) -> np.ndarray:
        return sum(a * p for a, p in zip(self.eigenvalues, self.projectors))

    def basis(self) -> np.ndarray:
        """Columns are unit vectors spanning each (rank-one) projector."""
        cols = []
        for p in self.projectors:
            w, v = np.linalg.eigh(p)
            cols.extend(v[:, w > 0.5].T)
        return np.array(cols).T


OBS_Z = Observable((1.0, -1.0), (ketbra(KET_0), ketbra(KET_1)), "sigma_z")
OBS_X = Observable((1.0, -1.0), (ketbra(KET_PLUS), ketbra(KET_MINUS)), "sigma_x")
OBS_Y = Observable.from_basis(
    np.array([[1, 1], [1j, -1j]]) / np.sqrt(2), (1.0, -1.0), "sigma_y"
)


def mub_overlaps(obs: Observable, obs_prime: Observable) -> np.ndarray:
    """Matrix of overlaps ``<o_i|o'_j>`` between two rank-one bases."""
    return dagger(obs.basis()) @ obs_prime.basis()


def is_mub(obs: Observable, obs_prime: Observable, tol: float = 1e-10) -> bool:
    ov = mub_overlaps(obs, obs_prime)
    d = obs.dim
    return ov.shape == (d, d) and bool(np.all(np.abs(np.abs(ov) - 1 / np.sqrt(d)) <= tol))


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel([np.eye(d)], name="identity")


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel([u], name="unitary")


def dephasing_channel(obs: Observable) -> KrausChannel:
    return KrausChannel(obs.projectors, name=f"dephasing_{obs.name}")


def monitoring_channel(obs: Observable, eps: float) -> KrausChannel:
    """Weak non-selective measurement of ``obs`` with strength ``eps``.

    Acts as ``(1 - eps) rho + eps * Phi(rho)`` with ``Phi`` the full dephasing
    in the eigenbasis of ``obs``.
    """
    if not 0.0 <= eps <= 1.0:
        raise ChannelError(f"monitoring strength must lie in [0, 1], got {eps}")
    ops = [np.sqrt(1.0 - eps) * np.eye(obs.dim)]
    ops += [np.sqrt(eps) * p for p in obs.projectors]
    return KrausChannel(ops, name=f"monitoring_{obs.name}({eps:g})")


PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)


def fridge_kraus(theta_cold: np.ndarray, unitaries: Sequence[np.ndarray] = PAULIS) -> KrausChannel:
    """Thermalising channel ``K_i = sqrt(theta/2) U_i`` over an orthogonal unitary set.

    With the Pauli set (``tr U_i^dag U_j = 2 delta_ij``) the channel replaces any
    qubit state with ``theta_cold``.
    """
    root = sqrtm_psd(np.asarray(theta_cold, dtype=complex) / 2.0)
    return KrausChannel([root @ u for u in unitaries], name="fridge")


def random_channel(d: int, n_kraus: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel from the first ``d`` columns of a Haar isometry."""
    u = random_unitary(d * n_kraus, rng)
    iso = u[:, :d]
    return KrausChannel([iso[k * d:(k + 1) * d, :] for k in range(n_kraus)], name="random")

