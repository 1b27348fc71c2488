from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import all_bit_vectors, bernoulli_weights, distillation_oracle
from topoqec import gf2
from topoqec.codes import HAMMING_H, RM15_HX, RM15_HX_PRINTED, RM15_HZ
from topoqec.distillation import (
    COST_EXPONENT,
    ENUMERATION_LIMIT,
    OCTAHEDRON_BOUND,
    OrthogonalityError,
    WeightEnumerator,
    build_css,
    css_fixture,
    distill_cost,
    distill_curve,
    distill_curve_enumerated,
    distill_threshold,
    macwilliams,
    output_error,
    weight_enumerator,
)


def test_steane_from_hamming():
    assert not ((HAMMING_H.astype(int) @ HAMMING_H.T.astype(int)) & 1).any()
    code = css_fixture("steane7")
    assert (code.n, code.k) == (7, 1)


def test_reed_muller_parameters():
    code = css_fixture("reed_muller15")
    assert (code.n, code.rank_x, code.k) == (15, 4, 1)
    assert code.rank_z == 10
    assert not ((code.hx.astype(int) @ code.hz.T.astype(int)) & 1).any()


def test_codeword_weights_mod_eight():
    code = css_fixture("reed_muller15")
    zero, one = code.logical_zero_terms(), code.logical_one_terms()
    assert len(zero) == len(one) == 16
    assert set(np.count_nonzero(zero, axis=1) % 8) == {0}
    assert set(np.count_nonzero(one, axis=1) % 8) == {7}


def test_printed_hx_rejected_with_row_pair():
    with pytest.raises(OrthogonalityError) as info:
        build_css(RM15_HX_PRINTED, RM15_HZ)
    i, j = info.value.rows
    assert (int(RM15_HX_PRINTED[i].astype(int) @ RM15_HZ[j].astype(int)) & 1) == 1


def test_row_swap_keeps_group():
    a = css_fixture("reed_muller15")
    b = build_css(RM15_HX[::-1], RM15_HZ)
    assert a.tableau().same_group(b.tableau())


def test_css_generators_commute():
    for name in ("steane7", "reed_muller15"):
        code = css_fixture(name)
        gens = code.stabilizers()
        assert all(x.commutes(z) for x in gens for z in gens)


def test_simple_enumerators():
    assert weight_enumerator(np.zeros((0, 4)), n=4) == WeightEnumerator(4, (1, 0, 0, 0, 0))
    rep = weight_enumerator([[1, 1, 1]])
    assert str(rep) == "x^3 + y^3"
    assert macwilliams(rep) == WeightEnumerator(3, (1, 0, 3, 0))
    assert macwilliams(macwilliams(rep), size=4) == rep
    with pytest.raises(ValueError):
        weight_enumerator(np.eye(ENUMERATION_LIMIT + 1, dtype=np.uint8))
    with pytest.raises(ValueError):
        macwilliams(rep, size=3)


def test_macwilliams_matches_direct_dual():
    for h in (HAMMING_H, RM15_HX, RM15_HZ):
        direct = weight_enumerator(gf2.nullspace(h))
        assert macwilliams(weight_enumerator(h)) == direct
        assert direct.coefficients[0] == 1 and direct.size == 2 ** gf2.nullspace(h).shape[0]


def test_kernel_enumerator_matches_brute_force():
    ker = weight_enumerator(gf2.nullspace(RM15_HX))
    vecs = all_bit_vectors(15)
    in_ker = ((vecs.astype(int) @ RM15_HX.T.astype(int)) & 1).sum(axis=1) == 0
    for p in (0.01, 0.1, 0.3):
        assert abs(ker.evaluate(1 - p, p) - bernoulli_weights(vecs[in_ker], p).sum()) < 1e-13


def test_curve_trivial_and_leading_order():
    assert distill_curve(0.0) == (1.0, 0.0)
    _, p_out = distill_curve(0.01)
    # frozen from the 2^15 enumeration oracle
    assert abs(p_out - 3.6087683965e-5) < 1e-15
    assert 0.97 <= p_out / (35 * 0.01**3) <= 1.10
    for p in (1e-3, 1e-4):
        assert abs(output_error(p) / (35 * p**3) - 1) < 0.01
    with pytest.raises(ValueError):
        distill_curve(0.6)


@pytest.mark.parametrize("p", [0.01, 0.05, 0.1])
def test_curve_matches_exhaustive_oracle(p):
    p_pass, p_out = distill_curve(p)
    o_pass, o_out = distillation_oracle(RM15_HX, p)
    assert abs(p_pass - o_pass) < 1e-12 and abs(p_out - o_out) < 1e-12
    e_pass, e_out = distill_curve_enumerated(p)
    assert abs(e_pass - o_pass) < 1e-12 and abs(e_out - o_out) < 1e-12
    # passing and rejection add to one under the oracle
    vecs = all_bit_vectors(15)
    rejected = ((vecs.astype(int) @ RM15_HX.T.astype(int)) & 1).any(axis=1)
    assert abs(o_pass + bernoulli_weights(vecs[rejected], p).sum() - 1) < 1e-12


def test_threshold_and_bound():
    p_star, bound = distill_threshold()
    assert abs(p_star - 0.141) < 1e-3
    assert abs(output_error(p_star) - p_star) < 1e-8
    assert output_error(0.05) < 0.05
    assert abs(bound - 0.146447) < 1e-6 and bound == OCTAHEDRON_BOUND


def test_cost():
    c = distill_cost(0.01, 0.02)
    assert (c.rounds, c.states) == (0, 1)
    c = distill_cost(0.01, 1e-15)
    r = math.sqrt(35)
    assert c.final_error <= 1e-15 < (r * 0.01) ** (3 ** (c.rounds - 1)) / r
    assert c.states == 15**c.rounds
    assert abs(math.log(c.estimate, 15) - c.rounds) <= 1
    assert abs(COST_EXPONENT - 2.465) < 1e-3
    with pytest.raises(ValueError):
        distill_cost(0.2, 1e-10)
    with pytest.raises(ValueError):
        distill_cost(0.01, 0)
