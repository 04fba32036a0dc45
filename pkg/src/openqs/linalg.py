"""Dense complex linear algebra shared by every other module.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Density matrices are ordinary square arrays; :func:`density_matrix`
validates one and returns it as such.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def ketbra(ket: np.ndarray, bra: np.ndarray | None = None) -> np.ndarray:
    """Return ``|ket><bra|`` (``|ket><ket|`` when ``bra`` is omitted)."""
    bra = ket if bra is None else bra
    return np.outer(ket, np.conj(bra))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(
        np.max(np.abs(m - dagger(m)), initial=0.0) <= tol
    )


def density_matrix(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``m`` as a density matrix and return it as a complex array.

    Raises:
        ValueError: if ``m`` is not square, not Hermitian, not unit trace or
            has an eigenvalue below ``-1e-10``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {m.shape}")
    if not is_hermitian(m, tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > tol:
        raise ValueError(f"density matrix has trace {np.trace(m).real!r}, expected 1")
    lowest = np.linalg.eigvalsh(m)[0]
    if lowest < -POSITIVITY_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lowest!r}")
    return m


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor outermost."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem of ``m`` whose index is not in ``keep``.

    :param m: square matrix on the composite space ``dims[0] x dims[1] x ...``.
    :param dims: dimension of each subsystem, outermost first.
    :param keep: indices of the subsystems to keep; order is preserved as in
        ``dims``. An empty ``keep`` returns the full trace as a 1x1 matrix.
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"dims {dims} do not match matrix shape {m.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    idx_row = list(range(n))
    idx_col = [n + i if i in keep else i for i in range(n)]
    out_idx = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(m.reshape(dims + dims), idx_row + idx_col, out_idx)
    k = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(k, k)


@dataclass(frozen=True)
class HermitianEigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def hermitian_eigen(m: np.ndarray, tol: float = POSITIVITY_TOL) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("hermitian_eigen requires a Hermitian matrix")
    # symmetrise so LAPACK sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    return HermitianEigenSystem(w, v)


def matrix_function(m: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply the scalar map ``f`` to a Hermitian matrix through its eigenbasis.

    ``f`` receives the real eigenvalue array and must return an array of the
    same length (real or complex, e.g. ``lambda w: np.exp(-1j * t * w)``).
    Non-finite results raise ``ValueError``.
    """
    es = hermitian_eigen(m)
    with np.errstate(invalid="ignore", divide="ignore"):
        fw = np.asarray(f(es.eigenvalues))
    if fw.shape != es.eigenvalues.shape or not np.all(np.isfinite(fw)):
        raise ValueError("function is undefined on the spectrum of the matrix")
    v = es.eigenvectors
    return (v * fw) @ dagger(v)


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Square root of a positive semidefinite matrix.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero; anything more negative
    is an error.
    """
    def _sqrt(w):
        if np.any(w < -POSITIVITY_TOL):
            return np.full_like(w, np.nan)
        return np.sqrt(np.clip(w, 0.0, None))

    return matrix_function(m, _sqrt)


def expm_hermitian(h: np.ndarray, t: complex) -> np.ndarray:
    """``exp(t * h)`` for Hermitian ``h`` and scalar (possibly complex) ``t``."""
    return matrix_function(h, lambda w: np.exp(t * w))


def _clamped_spectrum(rho: np.ndarray) -> np.ndarray:
    w = hermitian_eigen(rho).eigenvalues
    if w[0] < -POSITIVITY_TOL:
        raise ValueError(f"state has negative eigenvalue {w[0]!r}")
    return np.clip(w, 0.0, 1.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in nats, with ``0 ln 0 = 0``."""
    p = _clamped_spectrum(np.asarray(rho, dtype=complex))
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    w = hermitian_eigen(a - b).eigenvalues
    return float(0.5 * np.sum(np.abs(w)))


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state from the Ginibre ensemble."""
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (g + dagger(g))
