from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from topoqec.chain_complex import CubicComplex, dual
from topoqec.noise import (
    NoiseModel,
    bias_locator,
    coupling_from_p,
    sample_error,
    sample_spacetime_error,
    spacetime_from_errors,
    syndrome_bias,
)
from topoqec.surface_code import build_code


CODE = build_code("toric", 4)


def test_model_validation_and_circuit_ratios():
    with pytest.raises(ValueError):
        NoiseModel.iid_z(0.6)
    with pytest.raises(ValueError):
        NoiseModel.depolarizing(-0.1)
    m = NoiseModel.circuit_level(0.006)
    assert m.p1 == 0.006
    assert math.isclose(m.p_prep, 0.004) and math.isclose(m.p_meas_circuit, 0.004)


def test_config_spec():
    m = NoiseModel.from_config({"kind": "phenomenological", "p_data": 0.03, "p_meas": 0.02})
    assert (m.kind, m.p_data, m.p_meas) == ("phenomenological", 0.03, 0.02)
    assert NoiseModel.from_config("iid-z", 0.1).p_z == 0.1
    assert NoiseModel.from_config("phenomenological", 0.02).p_meas == 0.02


def test_zero_rate_is_empty():
    rng = np.random.default_rng(0)
    for _ in range(20):
        e = sample_error(NoiseModel.depolarizing(0.0), CODE, rng)
        assert not e.x.any() and not e.z.any()


def test_half_rate_marginal():
    rng = np.random.default_rng(1)
    e = sample_error(NoiseModel.iid_z(0.5), CODE, rng, shots=10_000)
    marg = e.z.mean(axis=0)
    assert np.all(np.abs(marg - 0.5) < 3 * 0.005 + 0.002)


def test_weight_distribution_is_binomial():
    rng = np.random.default_rng(2)
    n = CODE.n_qubits
    w = sample_error(NoiseModel.iid_z(0.1), CODE, rng, shots=20_000).z.sum(axis=1)
    observed = np.bincount(w, minlength=n + 1)
    expected = stats.binom.pmf(np.arange(n + 1), n, 0.1) * len(w)
    keep = expected >= 5
    obs = np.append(observed[keep], observed[~keep].sum())
    exp = np.append(expected[keep], expected[~keep].sum())
    exp *= obs.sum() / exp.sum()
    assert stats.chisquare(obs, exp).pvalue > 1e-3


def test_depolarizing_splits_evenly():
    rng = np.random.default_rng(3)
    e = sample_error(NoiseModel.depolarizing(0.3), CODE, rng, shots=20_000)
    only_x = (e.x & ~e.z & 1).mean()
    y = (e.x & e.z).mean()
    only_z = (e.z & ~e.x & 1).mean()
    for f in (only_x, y, only_z):
        assert abs(f - 0.1) < 0.003


def test_samplers_are_reproducible():
    a = sample_spacetime_error(NoiseModel.phenomenological(0.05), CODE, 3, np.random.default_rng(9))
    b = sample_spacetime_error(NoiseModel.phenomenological(0.05), CODE, 3, np.random.default_rng(9))
    assert np.array_equal(a.defects, b.defects) and np.array_equal(a.data, b.data)
    with pytest.raises(ValueError):
        sample_spacetime_error(NoiseModel.iid_z(0.1), CODE, 3, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_spacetime_error(NoiseModel.phenomenological(0.1), CODE, 0, np.random.default_rng(0))


def test_single_measurement_flip_gives_two_defects():
    data = np.zeros((4, CODE.n_qubits), np.uint8)
    meas = np.zeros((4, CODE.x_checks.shape[0]), np.uint8)
    meas[1, 6] = 1
    st = spacetime_from_errors(CODE, data, meas)
    assert np.argwhere(st.defects).tolist() == [[1, 6], [2, 6]]


def test_perfect_measurement_flags_fresh_data_errors_only():
    rng = np.random.default_rng(4)
    st = sample_spacetime_error(NoiseModel.phenomenological(0.05, 0.0), CODE, 5, rng)
    h = CODE.x_checks.astype(np.int64)
    for t in range(5):
        assert np.array_equal(st.defects[t], (st.data[t].astype(np.int64) @ h.T) & 1)
    assert not st.defects[5].any()


def test_differencing_identity():
    rng = np.random.default_rng(5)
    st = sample_spacetime_error(NoiseModel.phenomenological(0.1), CODE, 4, rng)
    assert np.array_equal(np.bitwise_xor.reduce(st.defects, axis=0), st.measured[-1])


def test_defects_equal_boundary_of_spacetime_chain():
    code = build_code("toric", 3)
    rounds = 3
    cc = CubicComplex(dual(code.surface), rounds + 1)
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        st = sample_spacetime_error(NoiseModel.phenomenological(0.08), code, rounds, rng)
        assert np.array_equal(cc.defects(st.chain(cc)), st.defects)


def test_syndrome_bias_values():
    assert syndrome_bias(NoiseModel.phenomenological(0.0)) == 1.0
    assert syndrome_bias(NoiseModel.circuit_level(0.0)) == 1.0
    assert abs(syndrome_bias(NoiseModel.phenomenological(0.0289)) - 0.70) < 1e-3
    with pytest.raises(ValueError):
        syndrome_bias(NoiseModel.iid_z(0.1))
    assert abs(bias_locator("phenomenological") - 0.0289) < 1e-4


def test_coupling():
    assert math.isclose(coupling_from_p(0.1), 0.5 * math.log(9))
    assert coupling_from_p(0.4999) < 1e-3
    ps = np.linspace(0.01, 0.49, 30)
    assert np.all(np.diff([coupling_from_p(p) for p in ps]) < 0)
    for bad in (0.0, 0.5, 0.7):
        with pytest.raises(ValueError):
            coupling_from_p(bad)
