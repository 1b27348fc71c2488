from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from oracles import all_syndromes, exhaustive_bitflip_posterior
from topoqec.concatenated import (
    ConcatenatedCode,
    InnerCode,
    bp_decode,
    channel_prior,
    concat_analytics,
    level_error,
)
from topoqec.codes import code_fixture
from topoqec.pauli import PauliProduct


def test_inner_code_decomposition_is_unique():
    inner = InnerCode(code_fixture("five_qubit"))
    letters, synd, logical = inner.tables
    # every (syndrome, logical) cell holds the same number of errors: one coset of the group
    counts = np.zeros((1 << inner.r, 4), int)
    np.add.at(counts, (synd, logical), 1)
    assert np.all(counts == counts[0, 0])
    assert counts.sum() == 4**inner.n


def test_pure_errors_flag_one_generator():
    inner = InnerCode(code_fixture("steane7"))
    for j, t in enumerate(inner.pure_errors):
        flags = [not t.commutes(g) for g in inner.generators]
        assert flags == [i == j for i in range(inner.r)]
        assert t.commutes(inner.logical_x) and t.commutes(inner.logical_z)


def test_inner_code_limits():
    with pytest.raises(ValueError):
        InnerCode(code_fixture("shor9"))
    with pytest.raises(ValueError):
        ConcatenatedCode.build("bitflip3", 0)


def test_level_one_equals_direct_block_posterior():
    cc = ConcatenatedCode.build("bitflip3", 1)
    for synd in all_syndromes(cc):
        res = bp_decode(cc, synd, 0.1)
        assert np.allclose(res.posterior, exhaustive_bitflip_posterior(cc, synd, 0.1), atol=1e-12)


def test_two_level_bp_equals_exhaustive_posterior():
    cc = ConcatenatedCode.build("bitflip3", 2)
    p = 0.13
    worst = 0.0
    for synd in all_syndromes(cc):
        res = bp_decode(cc, synd, p)
        worst = max(worst, np.max(np.abs(res.posterior - exhaustive_bitflip_posterior(cc, synd, p))))
    assert worst < 1e-12


def test_zero_syndrome_small_p_is_identity():
    cc = ConcatenatedCode.build("five_qubit", 2)
    zero = [np.zeros((cc.blocks(l), cc.inner.r), np.uint8) for l in (1, 2)]
    res = bp_decode(cc, zero, channel_prior(0.01, "depolarizing"))
    assert res.logical == 0 and res.logical_name == "I"


def test_bp_corrects_single_physical_errors():
    cc = ConcatenatedCode.build("steane7", 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        q = int(rng.integers(cc.n_physical))
        e = PauliProduct.single(cc.n_physical, q, "XZY"[int(rng.integers(3))])
        synd = cc.syndromes_of(e)
        res = bp_decode(cc, synd, 0.01, channel="depolarizing")
        # the class is read relative to the reference pure error, so it need not be 0
        assert res.logical == cc.logical_class(e, synd)


def test_logicals_and_generators_commute():
    cc = ConcatenatedCode.build("bitflip3", 2)
    lx, lz = cc.physical_logicals()
    assert not lx.commutes(lz)
    for level in (1, 2):
        for block in cc.physical_generators(level):
            for g in block:
                assert g.commutes(lx) and g.commutes(lz)


def test_channel_prior():
    assert np.allclose(channel_prior(0.3, "depolarizing"), [0.7, 0.1, 0.1, 0.1])
    with pytest.raises(ValueError):
        channel_prior(0.1, "amplitude")
    with pytest.raises(ValueError):
        bp_decode(ConcatenatedCode.build("bitflip3", 1), [np.zeros((1, 2))], np.ones((2, 4)))


def test_threshold_fixed_point():
    C = 10_000
    a = concat_analytics(C, 7, Fraction(1, C), 10**6)
    assert a.threshold == Fraction(1, C)
    assert all(e == Fraction(1, C) for e in a.level_errors)
    assert a.levels_needed is None and a.total_resources is None


def test_exact_level_errors():
    C, p = 10_000, Fraction(1, 10**5)
    a = concat_analytics(C, 7, p, 10**10)
    assert a.level_errors[3] == Fraction(1, 10**12) == (C * p) ** 8 / C
    assert level_error(C, p, 3) == Fraction(1, 10**12)
    assert a.levels_needed == 3 and a.total_resources == 7**3 * 10**10


def test_below_threshold_decreases_doubly_exponentially():
    a = concat_analytics(100, 7, Fraction(1, 1000), 10**40)
    e = a.level_errors
    assert all(x > y for x, y in zip(e, e[1:]))
    for l in range(1, len(e)):
        assert e[l] == 100 * e[l - 1] ** 2


def test_resources_grow_polylogarithmically():
    ratios = []
    for k in range(6, 13):
        a = concat_analytics(10_000, 7, Fraction(1, 10**5), 10**k)
        ratios.append(a.total_resources / 10**k)
    assert ratios == sorted(ratios)
    assert ratios[-1] <= 7**4


def test_invalid_analytics_inputs():
    with pytest.raises(ValueError):
        concat_analytics(0, 7, 0.1, 10)
    with pytest.raises(ValueError):
        concat_analytics(10, 7, 1.5, 10)
