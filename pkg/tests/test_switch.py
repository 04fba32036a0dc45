import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openqs.channels import (
    OBS_X,
    OBS_Z,
    dephasing_channel,
    identity_channel,
    monitoring_channel,
    random_channel,
)
from openqs.linalg import I2, KET_0, KET_PLUS, ketbra, random_density_matrix
from openqs.switch import (
    Outcome,
    assemble_joint,
    control_marginal,
    decompose,
    post_select,
    project_control,
    switch_state,
    system_marginal,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _random_setup(seed, d=2):
    rng = np.random.default_rng(seed)
    m = random_channel(d, int(rng.integers(1, 4)), rng)
    n = random_channel(d, int(rng.integers(1, 4)), rng)
    return m, n, random_density_matrix(d, rng), rng


def test_closed_control_in_zero_applies_n_then_m(rng):
    # W_ij carries M_i N_j on |0>: N acts first
    m, n, rho, _ = _random_setup(1)
    out = switch_state(m, n, rho, ketbra(KET_0))
    assert np.allclose(out, np.kron(m(n(rho)), ketbra(KET_0)), atol=1e-14)
    out = switch_state(m, n, rho, np.diag([0.0, 1.0]))
    assert np.allclose(out, np.kron(n(m(rho)), np.diag([0.0, 1.0])), atol=1e-14)


def test_identity_channels_leave_product(rng):
    rho = random_density_matrix(2, rng)
    out = switch_state(identity_channel(), identity_channel(), rho)
    assert np.allclose(out, np.kron(rho, ketbra(KET_PLUS)), atol=1e-14)


def test_mub_dephasings_scramble_system():
    out = switch_state(dephasing_channel(OBS_Z), dephasing_channel(OBS_X), ketbra(KET_PLUS))
    assert np.allclose(system_marginal(out, 2), I2 / 2, atol=1e-14)


def test_decompose_examples():
    rho = ketbra(KET_PLUS)
    dec = decompose(identity_channel(), identity_channel(), rho)
    assert np.allclose(dec.a_indef, rho) and np.allclose(dec.a_def, rho)
    dec = decompose(dephasing_channel(OBS_Z), dephasing_channel(OBS_Z), rho)
    for a in (dec.a_pm, dec.a_mp, dec.a_mm):
        assert np.max(np.abs(a)) == 0.0
    dec = decompose(monitoring_channel(OBS_Z, 1.0), monitoring_channel(OBS_X, 1.0), rho)
    assert np.trace(dec.a_indef).real == pytest.approx(0.5, abs=1e-14)
    assert post_select(dec, "minus").probability == pytest.approx(0.25, abs=1e-14)


def test_post_select_identity_channels():
    dec = decompose(identity_channel(), identity_channel(), ketbra(KET_PLUS))
    plus, minus = post_select(dec, Outcome.PLUS), post_select(dec, Outcome.MINUS)
    assert plus.probability == pytest.approx(1.0) and minus.probability == 0.0
    assert not minus.available
    with pytest.raises(ValueError, match="probability"):
        minus.conditional_state


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_decomposition_invariants(seed):
    m, n, rho, rng = _random_setup(seed, d=int(np.random.default_rng(seed).integers(2, 4)))
    dec = decompose(m, n, rho)
    dec.check()
    assert np.max(np.abs(dec.a_pp + dec.a_mm - dec.a_def)) < 1e-12
    assert np.max(np.abs(dec.a_pp - dec.a_mm - dec.a_indef)) < 1e-12
    assert np.max(np.abs(0.5 * dec.a_def + 0.5 * dec.a_indef - dec.a_pp)) < 1e-12
    p = post_select(dec, "plus").probability + post_select(dec, "minus").probability
    assert abs(p - 1) < 1e-10


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_assembly_matches_direct_sum_for_any_control(seed):
    m, n, rho, rng = _random_setup(seed)
    dec = decompose(m, n, rho)
    assert np.max(np.abs(assemble_joint(dec) - switch_state(m, n, rho))) < 1e-12
    rho_c = random_density_matrix(2, rng)
    assert np.max(np.abs(assemble_joint(dec, rho_c) - switch_state(m, n, rho, rho_c))) < 1e-12


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_system_marginal_is_mixture_of_orders(seed):
    m, n, rho, _ = _random_setup(seed)
    out = switch_state(m, n, rho)
    mix = 0.5 * (n(m(rho)) + m(n(rho)))
    assert np.max(np.abs(system_marginal(out, 2) - mix)) < 1e-10


@given(seeds, st.floats(0.0, 1.0))
@settings(max_examples=40, deadline=None)
def test_incoherent_control_stays_incoherent(seed, q):
    m, n, rho, _ = _random_setup(seed)
    out = switch_state(m, n, rho, np.diag([q, 1 - q]))
    c = control_marginal(out, 2)
    assert abs(c[0, 1]) < 1e-12 and abs(c[1, 0]) < 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_switch_output_is_a_state(seed):
    m, n, rho, rng = _random_setup(seed)
    out = switch_state(m, n, rho, random_density_matrix(2, rng))
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.linalg.eigvalsh(out)[0] > -1e-10


def test_projection_matches_blocks(rng):
    m, n, rho, _ = _random_setup(3)
    dec = decompose(m, n, rho)
    joint = switch_state(m, n, rho)
    for o in Outcome:
        a, b = post_select(dec, o), project_control(joint, o, 2)
        assert a.probability == pytest.approx(b.probability, abs=1e-12)
        assert np.allclose(a.conditional_state, b.conditional_state, atol=1e-12)


def test_dimension_mismatch_rejected(rng):
    with pytest.raises(ValueError):
        switch_state(identity_channel(2), identity_channel(3), I2 / 2)
    with pytest.raises(ValueError):
        decompose(identity_channel(2), identity_channel(2), np.eye(3) / 3)
