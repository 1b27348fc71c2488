from __future__ import annotations

import numpy as np
import pytest

from oracles import pauli_matrix
from topoqec.chain_complex import build_surface
from topoqec.pauli import PauliProduct, commutes, from_chain, multiply


def _random_pauli(rng, n):
    return PauliProduct(rng.integers(0, 2, n), rng.integers(0, 2, n), int(rng.integers(4)))


def test_letters_follow_bit_convention():
    p = PauliProduct.parse("IXZY")
    assert [p.letter(q) for q in range(4)] == list("IXZY")
    assert p.x_bits.tolist() == [0, 1, 0, 1]
    assert p.z_bits.tolist() == [0, 0, 1, 1]
    assert p.weight == 3


def test_xx_times_zz_is_minus_yy():
    assert multiply(PauliProduct.parse("XX"), PauliProduct.parse("ZZ")) == PauliProduct.parse("-YY")


def test_identity_is_neutral():
    p = PauliProduct.parse("-iXZY")
    assert p * PauliProduct.identity(3) == p
    assert PauliProduct.identity(3) * p == p


def test_product_matches_dense_matrices():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        p, q = _random_pauli(rng, n), _random_pauli(rng, n)
        assert np.allclose(pauli_matrix(p * q), pauli_matrix(p) @ pauli_matrix(q))


def test_commutation_matches_dense_commutator():
    rng = np.random.default_rng(2)
    for _ in range(500):
        n = int(rng.integers(1, 5))
        p, q = _random_pauli(rng, n), _random_pauli(rng, n)
        a, b = pauli_matrix(p), pauli_matrix(q)
        assert commutes(p, q) == np.allclose(a @ b, b @ a)
        assert commutes(p, q) == (p * q == q * p)


def test_small_commutation_cases():
    assert commutes(PauliProduct.parse("XX"), PauliProduct.parse("ZZ"))
    assert not commutes(PauliProduct.parse("X"), PauliProduct.parse("Z"))


def test_squares_are_plus_or_minus_identity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = _random_pauli(rng, 4)
        sq = p * p
        assert sq.weight == 0 and sq.phase in (0, 2)


def test_associativity():
    rng = np.random.default_rng(4)
    for _ in range(200):
        a, b, c = (_random_pauli(rng, 3) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_size_mismatch_raises():
    with pytest.raises(ValueError):
        multiply(PauliProduct.parse("X"), PauliProduct.parse("XX"))
    with pytest.raises(ValueError):
        commutes(PauliProduct.parse("X"), PauliProduct.parse("XX"))


def test_from_chain_basics_and_homomorphism():
    s = build_surface("torus", 3)
    assert from_chain(s, s.chain(1), "Z") == PauliProduct.identity(s.n_edges)
    assert from_chain(s, s.chain(1, [4]), "Z") == PauliProduct.single(s.n_edges, 4, "Z")
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = s.chain(1, np.flatnonzero(rng.integers(0, 2, s.n_edges)))
        b = s.chain(1, np.flatnonzero(rng.integers(0, 2, s.n_edges)))
        assert from_chain(s, a, "X") * from_chain(s, b, "X") == from_chain(s, a + b, "X")
        # X(c) and Z(c') commute iff c.c' = 0
        assert commutes(from_chain(s, a, "X"), from_chain(s, b, "Z")) == (a.dot(b) == 0)


def test_from_chain_rejects_other_dimensions():
    s = build_surface("torus", 3)
    with pytest.raises(ValueError):
        from_chain(s, s.chain(2, [0]), "Z")
