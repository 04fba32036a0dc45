import numpy as np
import pytest

from openqs import kernels
from openqs.channels import random_channel
from openqs.collision import CollisionParams, collision_unitary, initial_state, thermal_qubit
from openqs.linalg import SIGMA_X, random_density_matrix

needs_compiled = pytest.mark.skipif("cython" not in kernels.available_backends(),
                                    reason="compiled extension not built")


def _case(d, seed=0, beta=1.0):
    rng = np.random.default_rng(seed)
    m, n = random_channel(d, 2, rng), random_channel(d, 2, rng)
    h = np.zeros((d, d), complex)
    h[:2, :2] = -0.5 * SIGMA_X
    p = CollisionParams(1.0, 0.2, 1.0, beta, h_s=h)
    rho0 = initial_state(m, n, random_density_matrix(d, rng)).joint
    return rho0, collision_unitary(p), thermal_qubit(beta, 1.0)


def test_backend_is_selected_at_import():
    assert kernels.BACKEND in kernels.available_backends()
    assert "numpy" in kernels.available_backends()


@needs_compiled
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_backends_agree(d):
    rho0, u, anc = _case(max(d, 2), seed=d)
    a_states, a_anc = kernels.collide_trajectory(rho0, u, anc, 200, backend="numpy")
    b_states, b_anc = kernels.collide_trajectory(rho0, u, anc, 200, backend="cython")
    assert np.max(np.abs(a_states - b_states)) < 1e-12
    assert np.max(np.abs(a_anc - b_anc)) < 1e-12


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_trajectory_shape_trace_and_seed(backend):
    rho0, u, anc = _case(2)
    states, ancs = kernels.collide_trajectory(rho0, u, anc, 30, backend=backend)
    assert states.shape == (31, 4, 4) and ancs.shape == (30, 2, 2)
    assert np.array_equal(states[0], rho0)
    assert np.allclose(np.trace(states, axis1=1, axis2=2), 1.0, atol=1e-12)
    assert np.allclose(np.trace(ancs, axis1=1, axis2=2), 1.0, atol=1e-12)


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_zero_steps(backend):
    rho0, u, anc = _case(2)
    states, ancs = kernels.collide_trajectory(rho0, u, anc, 0, backend=backend)
    assert states.shape == (1, 4, 4) and ancs.shape == (0, 2, 2)


def test_bad_inputs():
    rho0, u, anc = _case(2)
    with pytest.raises(ValueError, match="shapes"):
        kernels.collide_trajectory(rho0, u[:4, :4], anc, 3)
    with pytest.raises(ValueError, match="backend"):
        kernels.collide_trajectory(rho0, u, anc, 3, backend="fortran")
