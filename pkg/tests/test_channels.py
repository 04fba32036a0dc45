import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openqs.channels import (
    OBS_X,
    OBS_Y,
    OBS_Z,
    ChannelError,
    KrausChannel,
    Observable,
    apply_channel,
    completeness_error,
    dephasing_channel,
    fridge_kraus,
    identity_channel,
    is_mub,
    monitoring_channel,
    random_channel,
    unitary_channel,
)
from openqs.collision import thermal_qubit
from openqs.linalg import I2, KET_0, KET_PLUS, SIGMA_X, ketbra, random_density_matrix, random_unitary
from openqs.thermo import available_information, coherence

GRID11 = [k / 10 for k in range(11)]
seeds = st.integers(min_value=0, max_value=2**32 - 1)
strengths = st.floats(min_value=0.0, max_value=1.0)


def _all_channels(rng):
    theta = thermal_qubit(1.5, 1.0, "z")
    chans = [identity_channel(), dephasing_channel(OBS_Z), dephasing_channel(OBS_X),
             dephasing_channel(OBS_Y), fridge_kraus(theta), fridge_kraus(I2 / 2),
             unitary_channel(random_unitary(2, rng))]
    chans += [monitoring_channel(o, e) for o in (OBS_Z, OBS_X, OBS_Y) for e in GRID11]
    chans += [random_channel(2, k, rng) for k in (1, 2, 3, 4)]
    return chans


def test_apply_channel_examples(rng):
    rho = random_density_matrix(2, rng)
    assert np.allclose(apply_channel(identity_channel(), rho), rho)
    assert np.allclose(dephasing_channel(OBS_Z)(ketbra(KET_PLUS)), I2 / 2)
    ch = KrausChannel([math.sqrt(0.7) * I2, math.sqrt(0.3) * SIGMA_X])
    assert np.allclose(ch(ketbra(KET_0)), np.diag([0.7, 0.3]), atol=1e-15)


def test_dephasing(rng):
    ch = dephasing_channel(OBS_Z)
    assert np.allclose(ch.operators[0], ketbra(KET_0))
    rho = random_density_matrix(2, rng)
    assert np.allclose(ch(ch(rho)), ch(rho), atol=1e-14)
    assert np.allclose(ch(dephasing_channel(OBS_X)(rho)), I2 / 2, atol=1e-12)


def test_monitoring_endpoints(rng):
    rho = random_density_matrix(2, rng)
    assert np.allclose(monitoring_channel(OBS_Z, 0.0)(rho), rho, atol=1e-14)
    assert np.allclose(monitoring_channel(OBS_Z, 1.0)(rho), dephasing_channel(OBS_Z)(rho), atol=1e-14)
    for eps in GRID11:
        expect = (1 - eps) * rho + eps * dephasing_channel(OBS_X)(rho)
        assert np.allclose(monitoring_channel(OBS_X, eps)(rho), expect, atol=1e-14)
    with pytest.raises(ChannelError):
        monitoring_channel(OBS_Z, 1.2)


def test_monitoring_composition_law(rng):
    rhos = [random_density_matrix(2, rng) for _ in range(5)]
    for obs in (OBS_Z, OBS_X):
        for e1 in GRID11:
            for e2 in GRID11:
                both = monitoring_channel(obs, e1).then(monitoring_channel(obs, e2))
                single = monitoring_channel(obs, e1 + e2 - e1 * e2)
                for rho in rhos:
                    assert np.max(np.abs(both(rho) - single(rho))) < 1e-10


def test_mub_monitorings_commute(rng):
    for e1 in GRID11:
        for e2 in GRID11:
            rho = random_density_matrix(2, rng)
            zx = monitoring_channel(OBS_X, e2)(monitoring_channel(OBS_Z, e1)(rho))
            xz = monitoring_channel(OBS_Z, e1)(monitoring_channel(OBS_X, e2)(rho))
            assert np.max(np.abs(zx - xz)) < 1e-10


def test_double_dephasing_of_mubs_is_maximally_mixed(rng):
    assert is_mub(OBS_Z, OBS_X) and is_mub(OBS_X, OBS_Y) and not is_mub(OBS_Z, OBS_Z)
    for a, b in ((OBS_Z, OBS_X), (OBS_X, OBS_Z), (OBS_Y, OBS_Z)):
        for _ in range(20):
            rho = random_density_matrix(2, rng)
            out = dephasing_channel(b)(dephasing_channel(a)(rho))
            assert np.max(np.abs(out - I2 / 2)) < 1e-12


def test_fridge_kraus(rng):
    k0 = fridge_kraus(I2 / 2)
    assert all(np.allclose(k, u / 2) for k, u in zip(k0.operators, (I2, SIGMA_X)))
    theta = thermal_qubit(1.5, 1.0, "z")
    ch = fridge_kraus(theta)
    assert completeness_error(ch.operators) < 1e-10
    for _ in range(10):
        assert np.max(np.abs(ch(random_density_matrix(2, rng)) - theta)) < 1e-12


def test_every_channel_is_cptp(rng):
    rhos = [random_density_matrix(2, rng) for _ in range(100)]
    for ch in _all_channels(rng):
        assert completeness_error(ch.operators) < 1e-10
        for rho in rhos:
            out = ch(rho)
            assert abs(np.trace(out) - 1) < 1e-10
            assert np.max(np.abs(out - out.conj().T)) < 1e-10
            assert np.linalg.eigvalsh(out)[0] > -1e-10


def test_incomplete_kraus_rejected():
    with pytest.raises(ChannelError, match="complete"):
        KrausChannel([0.9 * I2])
    with pytest.raises(ChannelError):
        KrausChannel([I2, np.eye(3)])
    with pytest.raises(ChannelError):
        KrausChannel([])


def test_observable_validation():
    with pytest.raises(ChannelError):
        Observable((1.0, -1.0), (ketbra(KET_0), ketbra(KET_PLUS)))
    with pytest.raises(ChannelError):
        Observable((1.0,), (ketbra(KET_0),))
    assert np.allclose(OBS_Z.matrix(), np.diag([1, -1]))


@given(seeds, strengths, strengths)
@settings(max_examples=60, deadline=None)
def test_information_never_grows_under_monitoring(seed, e1, e2):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    out = monitoring_channel(OBS_X, e2)(monitoring_channel(OBS_Z, e1)(rho))
    assert available_information(rho) >= available_information(out) - 1e-12


@given(seeds, strengths)
@settings(max_examples=60, deadline=None)
def test_monitoring_information_bound(seed, eps):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    drop = available_information(rho) - available_information(monitoring_channel(OBS_Z, eps)(rho))
    assert drop >= eps * coherence(rho, OBS_Z) - 1e-10
