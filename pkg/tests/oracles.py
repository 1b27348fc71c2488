"""Independent brute-force references: dense linear algebra and exhaustive enumeration."""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

from topoqec.pauli import PauliProduct

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])
SDG = np.diag([1, -1j])
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "S": S, "SDG": SDG}
PHASES = {0: 1, 1: 1j, 2: -1, 3: -1j}


def pauli_matrix(p) -> np.ndarray:
    """Dense matrix of a PauliProduct, qubit 0 as the most significant factor."""
    mats = []
    for xb, zb in zip(p.x_bits, p.z_bits):
        mats.append({(0, 0): I2, (1, 0): X, (0, 1): Z, (1, 1): Y}[(int(xb), int(zb))])
    return PHASES[p.phase] * reduce(np.kron, mats, np.eye(1, dtype=complex))


def _apply_1q(psi: np.ndarray, n: int, u: np.ndarray, q: int) -> np.ndarray:
    psi = psi.reshape([2] * n)
    psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [q])), 0, q)
    return psi.reshape(-1)


def _apply_controlled(psi: np.ndarray, n: int, u: np.ndarray, c: int, t: int) -> np.ndarray:
    psi = psi.reshape([2] * n).copy()
    idx = [slice(None)] * n
    idx[c] = 1
    sub = psi[tuple(idx)]
    tq = t if t < c else t - 1
    sub = np.moveaxis(np.tensordot(u, sub, axes=([1], [tq])), 0, tq)
    psi[tuple(idx)] = sub
    return psi.reshape(-1)


def statevector(circuit, psi: np.ndarray | None = None) -> np.ndarray:
    n = circuit.n
    if psi is None:
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1
    for g, qs in circuit.gates:
        if g == "CNOT":
            psi = _apply_controlled(psi, n, X, qs[0], qs[1])
        elif g == "CZ":
            psi = _apply_controlled(psi, n, Z, qs[0], qs[1])
        else:
            psi = _apply_1q(psi, n, SINGLE[g], qs[0])
    return psi


def outcome_probabilities(psi: np.ndarray, n: int, measured) -> dict[tuple[int, ...], float]:
    probs = np.abs(psi.reshape([2] * n)) ** 2
    others = tuple(q for q in range(n) if q not in measured)
    marg = probs.sum(axis=others) if others else probs
    # axes of marg follow sorted(measured); reorder to the mask order
    order = sorted(measured)
    marg = np.transpose(marg, [order.index(q) for q in measured])
    return {bits: float(marg[bits]) for bits in itertools.product((0, 1), repeat=len(measured))}


def stabilizer_projector(gens) -> np.ndarray:
    """Projector onto the joint +1 eigenspace of commuting Pauli generators."""
    n = gens[0].n
    proj = np.eye(2**n, dtype=complex)
    for g in gens:
        proj = proj @ (np.eye(2**n) + pauli_matrix(g)) / 2
    return proj


def state_of(tableau) -> np.ndarray:
    """A normalized vector stabilized by a full-rank tableau."""
    proj = stabilizer_projector(tableau.generators)
    w, v = np.linalg.eigh((proj + proj.conj().T) / 2)
    return v[:, np.argmax(w)]


def min_perfect_matching_weight(w: np.ndarray) -> int:
    """Exhaustive minimum over all (n-1)!! pairings."""
    n = w.shape[0]

    def rec(rest: tuple[int, ...]) -> int:
        if not rest:
            return 0
        a = rest[0]
        best = None
        for k in range(1, len(rest)):
            b = rest[k]
            val = w[a, b] + rec(rest[1:k] + rest[k + 1 :])
            best = val if best is None else min(best, val)
        return best

    return int(rec(tuple(range(n))))


def all_bit_vectors(n: int) -> np.ndarray:
    return ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def bernoulli_weights(vecs: np.ndarray, p: float) -> np.ndarray:
    w = vecs.sum(axis=1)
    n = vecs.shape[1]
    return p**w * (1 - p) ** (n - w)


def distillation_oracle(hx: np.ndarray, p: float) -> tuple[float, float]:
    """(p_pass, p_out) from all 2^15 Z-error patterns.

    A pattern passes when every X check is satisfied; among passing
    patterns the odd-weight ones anticommute with the transversal X logical.
    """
    vecs = all_bit_vectors(hx.shape[1])
    pr = bernoulli_weights(vecs, p)
    passed = ((vecs.astype(np.int64) @ hx.T.astype(np.int64)) & 1).sum(axis=1) == 0
    odd = vecs.sum(axis=1) % 2 == 1
    p_pass = pr[passed].sum()
    return float(p_pass), float(pr[passed & odd].sum() / p_pass)


def toric_ml_posterior(code, syndrome_bits: np.ndarray, reference: np.ndarray, p: float) -> np.ndarray:
    """Class posterior by summing over every Z-error pattern with the syndrome."""
    vecs = all_bit_vectors(code.n_qubits)
    synd = (vecs.astype(np.int64) @ code.x_checks.T.astype(np.int64)) & 1
    match = np.all(synd == syndrome_bits[None, :], axis=1)
    sel = vecs[match]
    pr = bernoulli_weights(sel, p)
    cls = ((sel ^ reference).astype(np.int64) @ code.logical_x.T.astype(np.int64)) & 1
    idx = (cls << np.arange(cls.shape[1])).sum(axis=1)
    post = np.bincount(idx, weights=pr, minlength=1 << cls.shape[1])
    return post / post.sum()


def exhaustive_bitflip_posterior(cc, syndromes, p: float) -> np.ndarray:
    """P(logical | syndromes) summed over every X-error pattern."""
    n = cc.n_physical
    post = np.zeros(4)
    target = [np.asarray(s, np.uint8) for s in syndromes]
    for bits, w in zip(all_bit_vectors(n), bernoulli_weights(all_bit_vectors(n), p)):
        e = PauliProduct(bits, np.zeros(n, np.uint8))
        got = cc.syndromes_of(e)
        if all(np.array_equal(a.ravel(), b.ravel()) for a, b in zip(got, target)):
            post[cc.logical_class(e, got)] += w
    return post / post.sum()


def all_syndromes(cc):
    shapes = [(cc.blocks(l), cc.inner.r) for l in range(1, cc.levels + 1)]
    total = sum(a * b for a, b in shapes)
    for bits in itertools.product((0, 1), repeat=total):
        out, k = [], 0
        for a, b in shapes:
            out.append(np.array(bits[k : k + a * b], np.uint8).reshape(a, b))
            k += a * b
        yield out
