# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled collision loop.

Same contract as ``openqs._pykernels.collide_trajectory``; the caller owns
every buffer.
"""


cdef void _step(const double complex[:, ::1] rho,
                const double complex[:, ::1] u,
                const double complex[:, ::1] anc,
                double complex[:, ::1] big,
                double complex[:, ::1] tmp,
                double complex[:, ::1] rho_out,
                double complex[:, ::1] e_out) noexcept nogil:
    cdef Py_ssize_t m = rho.shape[0]
    cdef Py_ssize_t dim = 2 * m
    cdef Py_ssize_t i, j, k, l, a, b, c
    cdef double complex acc, r

    for i in range(m):
        for j in range(m):
            r = rho[i, j]
            for k in range(2):
                for l in range(2):
                    big[2 * i + k, 2 * j + l] = r * anc[k, l]

    # tmp = U . big
    for a in range(dim):
        for b in range(dim):
            acc = 0
            for c in range(dim):
                acc = acc + u[a, c] * big[c, b]
            tmp[a, b] = acc

    # big = tmp . U^dagger
    for a in range(dim):
        for b in range(dim):
            acc = 0
            for c in range(dim):
                acc = acc + tmp[a, c] * u[b, c].conjugate()
            big[a, b] = acc

    for i in range(m):
        for j in range(m):
            rho_out[i, j] = big[2 * i, 2 * j] + big[2 * i + 1, 2 * j + 1]
    for k in range(2):
        for l in range(2):
            acc = 0
            for i in range(m):
                acc = acc + big[2 * i + k, 2 * i + l]
            e_out[k, l] = acc


def collide_trajectory(const double complex[:, ::1] u,
                       const double complex[:, ::1] anc,
                       double complex[:, :, ::1] sc_out,
                       double complex[:, :, ::1] e_out,
                       double complex[:, ::1] big,
                       double complex[:, ::1] tmp):
    """Fill ``sc_out[1:]`` and ``e_out`` from the seed state in ``sc_out[0]``."""
    cdef Py_ssize_t steps = e_out.shape[0]
    cdef Py_ssize_t s
    with nogil:
        for s in range(steps):
            _step(sc_out[s], u, anc, big, tmp, sc_out[s + 1], e_out[s])
