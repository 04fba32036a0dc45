"""Pure numpy collision loop, used when the compiled extension is absent."""
from __future__ import annotations

import numpy as np


def collide_trajectory(u, anc, sc_out, e_out, big=None, tmp=None):
    """Fill ``sc_out[1:]`` and ``e_out`` from the seed state in ``sc_out[0]``.

    Each step forms ``rho x anc``, conjugates it by ``u`` and splits the result
    into its ``SC`` marginal (written to ``sc_out[s + 1]``) and ancilla marginal
    (``e_out[s]``). ``big``/``tmp`` are accepted for signature parity only.
    """
    m = sc_out.shape[1]
    u_dag = u.conj().T
    for s in range(e_out.shape[0]):
        out = u @ np.kron(sc_out[s], anc) @ u_dag
        r = out.reshape(m, 2, m, 2)
        sc_out[s + 1] = np.einsum("ikjk->ij", r)
        e_out[s] = np.einsum("ikil->kl", r)
