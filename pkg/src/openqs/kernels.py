"""Backend selection for the brute-force collision loop.

The compiled extension ``openqs._ckernels`` is used when it imports; the
numpy implementation in ``openqs._pykernels`` is the fallback. Both remain
importable so they can be benchmarked and cross-checked.
"""
from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "numpy"


def _run(impl, rho0, u, anc, steps):
    rho0 = np.ascontiguousarray(rho0, dtype=complex)
    u = np.ascontiguousarray(u, dtype=complex)
    anc = np.ascontiguousarray(anc, dtype=complex)
    m = rho0.shape[0]
    if u.shape != (2 * m, 2 * m) or anc.shape != (2, 2):
        raise ValueError(f"incompatible shapes: state {rho0.shape}, unitary {u.shape}, ancilla {anc.shape}")
    sc = np.empty((steps + 1, m, m), dtype=complex)
    e = np.empty((steps, 2, 2), dtype=complex)
    sc[0] = rho0
    big = np.empty((2 * m, 2 * m), dtype=complex)
    tmp = np.empty_like(big)
    impl.collide_trajectory(u, anc, sc, e, big, tmp)
    return sc, e


def collide_trajectory(rho0, u, anc, steps: int, backend: str | None = None):
    """Run ``steps`` collisions of ``rho0`` with fresh copies of ``anc``.

    ``u`` acts on ``(state) x (ancilla)`` with the ancilla as the last factor.
    Returns ``(states, ancillas)``: the ``steps + 1`` reduced states including
    the seed, and the ``steps`` outgoing ancilla states.
    """
    backend = BACKEND if backend is None else backend
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        impl = _ckernels
    elif backend == "numpy":
        impl = _pykernels
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return _run(impl, rho0, u, anc, int(steps))


def available_backends() -> list[str]:
    return ["numpy"] + (["cython"] if _ckernels is not None else [])
