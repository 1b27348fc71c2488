"""Concatenated stabilizer codes: exact tree belief propagation and level analytics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import gf2
from .codes import CodeFixture, code_fixture
from .pauli import PauliProduct

# single-qubit Pauli index = x + 2 z : I, X, Z, Y
PAULI_INDEX = {"I": 0, "X": 1, "Z": 2, "Y": 3}
MAX_INNER_QUBITS = 8


def _sym(p: PauliProduct) -> np.ndarray:
    """Row that pairs with another Pauli's (x|z) to give their commutation bit."""
    return np.concatenate([p.z_bits, p.x_bits]).astype(np.uint8)


class InnerCode:
    """Per-level tables: syndrome and logical class of every n-qubit Pauli.

    Every error decomposes uniquely as E = L G R(S).  R(S) is the product
    of pure errors T_j over the flagged generators j; T_j anticommutes with
    generator j only and commutes with both logicals.
    """

    def __init__(self, fixture: CodeFixture) -> None:
        if fixture.k != 1:
            raise ValueError("concatenation needs a code with one logical qubit")
        if fixture.n > MAX_INNER_QUBITS:
            raise ValueError(f"inner code with {fixture.n} qubits is too large for exhaustive tables")
        gens = gf2.row_basis(np.array([g.symplectic() for g in fixture.stabilizers], np.uint8))
        self.fixture = fixture
        self.n = fixture.n
        self.generators = [PauliProduct(row[: self.n], row[self.n :]) for row in gens]
        self.r = len(self.generators)
        if self.r != self.n - 1:
            raise ValueError("inner code must have n - 1 independent generators")
        self.logical_x = fixture.logical_x[0]
        self.logical_z = fixture.logical_z[0]
        checks = [_sym(g) for g in self.generators] + [_sym(self.logical_x), _sym(self.logical_z)]
        solver = gf2.Solver(np.array(checks, np.uint8))
        self.pure_errors = []
        for j in range(self.r):
            target = np.zeros(self.r + 2, np.uint8)
            target[j] = 1
            sol = solver.solve(target)
            if sol is None:
                raise ValueError("no pure error exists for generator %d" % j)
            self.pure_errors.append(PauliProduct(sol[: self.n], sol[self.n :]))

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(letters[4^n, n], syndrome index[4^n], logical index[4^n]) over all Paulis."""
        n = self.n
        letters = np.array(list(itertools.product(range(4), repeat=n)), np.int64).reshape(-1, n)
        x = (letters & 1).astype(np.uint8)
        z = (letters >> 1).astype(np.uint8)
        sym = np.concatenate([x, z], axis=1).astype(np.int64)
        gen_rows = np.array([_sym(g) for g in self.generators], np.int64)
        synd_bits = (sym @ gen_rows.T) & 1
        synd = (synd_bits << np.arange(self.r)).sum(axis=1)
        # strip R(S), then read the logical from commutation with Zbar and Xbar
        ref = np.zeros((len(letters), 2 * n), np.int64)
        for j, t in enumerate(self.pure_errors):
            ref ^= np.outer(synd_bits[:, j], t.symplectic())
        core = sym ^ ref
        lx = (core @ _sym(self.logical_z).astype(np.int64)) & 1  # X-part of the logical
        lz = (core @ _sym(self.logical_x).astype(np.int64)) & 1
        return letters, synd, lx + 2 * lz

    def block_message(self, priors: np.ndarray, syndrome: int) -> np.ndarray:
        """mu(L) = P(logical L, syndrome S | child priors), unnormalized."""
        letters, synd, logical = self.tables
        sel = synd == syndrome
        probs = np.ones(int(sel.sum()))
        for q in range(self.n):
            probs = probs * priors[q][letters[sel, q]]
        out = np.zeros(4)
        np.add.at(out, logical[sel], probs)
        return out


@dataclass
class ConcatenatedCode:
    """``levels`` nested copies of one inner code on n^levels physical qubits.

    Level-l block b acts on the logical qubits of level-(l-1) blocks
    b*n .. b*n+n-1; level-0 "blocks" are physical qubits.
    """

    inner: InnerCode
    levels: int

    @classmethod
    def build(cls, fixture: CodeFixture | str, levels: int) -> ConcatenatedCode:
        if levels < 1:
            raise ValueError("need at least one level")
        if isinstance(fixture, str):
            fixture = code_fixture(fixture)
        return cls(InnerCode(fixture), levels)

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def n_physical(self) -> int:
        return self.n**self.levels

    def blocks(self, level: int) -> int:
        return self.n ** (self.levels - level)

    @property
    def syndrome_shape(self) -> list[int]:
        """Generator count per level (blocks x generators)."""
        return [self.blocks(l) * self.inner.r for l in range(1, self.levels + 1)]

    @cached_property
    def _physical(self):
        """Physical operators per level: generators, pure errors and top logicals."""
        n = self.n
        xbar = {0: [PauliProduct.single(self.n_physical, q, "X") for q in range(self.n_physical)]}
        zbar = {0: [PauliProduct.single(self.n_physical, q, "Z") for q in range(self.n_physical)]}
        gens, pures = {}, {}

        def lift(p: PauliProduct, block: int, level: int) -> PauliProduct:
            out = PauliProduct.identity(self.n_physical)
            for q in range(n):
                child = block * n + q
                letter = p.letter(q)
                if letter in "XY":
                    out = out * xbar[level - 1][child]
                if letter in "ZY":
                    out = out * zbar[level - 1][child]
            return out

        for level in range(1, self.levels + 1):
            nb = self.blocks(level)
            gens[level] = [[lift(g, b, level) for g in self.inner.generators] for b in range(nb)]
            pures[level] = [[lift(t, b, level) for t in self.inner.pure_errors] for b in range(nb)]
            xbar[level] = [lift(self.inner.logical_x, b, level) for b in range(nb)]
            zbar[level] = [lift(self.inner.logical_z, b, level) for b in range(nb)]
        return gens, pures, xbar[self.levels][0], zbar[self.levels][0]

    def physical_generators(self, level: int) -> list[list[PauliProduct]]:
        return self._physical[0][level]

    def physical_logicals(self) -> tuple[PauliProduct, PauliProduct]:
        return self._physical[2], self._physical[3]

    def syndromes_of(self, error: PauliProduct) -> list[np.ndarray]:
        gens = self._physical[0]
        return [
            np.array([[0 if error.commutes(g) else 1 for g in blk] for blk in gens[level]], np.uint8)
            for level in range(1, self.levels + 1)
        ]

    def reference_error(self, syndromes) -> PauliProduct:
        """Product of the pure errors selected by all levels' syndromes."""
        pures = self._physical[1]
        out = PauliProduct.identity(self.n_physical)
        for level, s in enumerate(self._check_syndromes(syndromes), start=1):
            for b, row in enumerate(s):
                for j, bit in enumerate(row):
                    if bit:
                        out = out * pures[level][b][j]
        return out

    def logical_class(self, error: PauliProduct, syndromes=None) -> int:
        """Index x + 2 z of the top-level logical in E = L G R(S)."""
        if syndromes is None:
            syndromes = self.syndromes_of(error)
        core = error * self.reference_error(syndromes)
        lx, lz = self.physical_logicals()
        return int(not core.commutes(lz)) + 2 * int(not core.commutes(lx))

    def _check_syndromes(self, syndromes) -> list[np.ndarray]:
        if len(syndromes) != self.levels:
            raise ValueError(f"expected syndromes for {self.levels} levels, got {len(syndromes)}")
        out = []
        for level, s in enumerate(syndromes, start=1):
            a = np.asarray(s, np.uint8).reshape(self.blocks(level), self.inner.r)
            out.append(a)
        return out


def channel_prior(p: float, kind: str = "bitflip") -> np.ndarray:
    """Single-qubit Pauli distribution over (I, X, Z, Y)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} is outside [0, 1]")
    if kind == "bitflip":
        return np.array([1 - p, p, 0.0, 0.0])
    if kind == "phaseflip":
        return np.array([1 - p, 0.0, p, 0.0])
    if kind == "depolarizing":
        return np.array([1 - p, p / 3, p / 3, p / 3])
    raise ValueError(f"unknown channel {kind!r}")


@dataclass
class BPResult:
    logical: int
    posterior: np.ndarray
    messages: list[np.ndarray]

    @property
    def logical_name(self) -> str:
        return "IXZY"[self.logical]


def bp_decode(cc: ConcatenatedCode, syndromes, p: float | np.ndarray, channel: str = "bitflip") -> BPResult:
    """Posterior of the top logical by leaf-to-root message passing.

    The tree is exact: each block's message depends only on its children
    and its own syndrome, so the root message is the exact joint
    P(L, all syndromes) up to normalization.  ``messages[l]`` holds the
    normalized level-l messages (shape blocks x 4).
    """
    synd = cc._check_syndromes(syndromes)
    prior = np.asarray(p, float) if np.ndim(p) else channel_prior(float(p), channel)
    if prior.shape == (4,):
        prior = np.tile(prior, (cc.n_physical, 1))
    if prior.shape != (cc.n_physical, 4):
        raise ValueError("priors must be one 4-vector or one per physical qubit")
    msgs = [prior]
    current = prior
    for level in range(1, cc.levels + 1):
        nb = cc.blocks(level)
        nxt = np.zeros((nb, 4))
        for b in range(nb):
            s = int(sum(int(bit) << j for j, bit in enumerate(synd[level - 1][b])))
            mu = cc.inner.block_message(current[b * cc.n : (b + 1) * cc.n], s)
            total = mu.sum()
            nxt[b] = mu / total if total > 0 else mu
        msgs.append(nxt)
        current = nxt
    post = current[0]
    if post.sum() == 0:
        raise ValueError("syndrome has zero probability under the channel")
    return BPResult(int(np.argmax(post)), post, msgs)


# ---------------------------------------------------------------------------
# analytics


@dataclass
class ConcatAnalytics:
    threshold: Fraction | float
    level_errors: list
    levels_needed: int | None
    total_resources: Fraction | float | None


def level_error(C, p, level: int):
    """p^(l) = (C p)^(2^l) / C, exact for Fractions and ints."""
    return (C * p) ** (2**level) / C


def concat_analytics(C, N, p, M, max_levels: int = 64) -> ConcatAnalytics:
    """Threshold 1/C, per-level errors, the level count and the total resources.

    The level count is the least l with p^(l) M < 1 and the total resources
    are N^l M.  Below threshold this always terminates; at or above
    threshold no such level exists and both come back as None.
    Exact arithmetic is used when the inputs are ints or Fractions.
    """
    exact = all(isinstance(v, (int, Fraction)) for v in (C, N, p, M))
    if exact:
        C, N, p, M = (Fraction(v) for v in (C, N, p, M))
    if C < 1 or N < 1:
        raise ValueError("C and N must be >= 1")
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    threshold = 1 / C
    errs = [level_error(C, p, 0)]
    if C * p >= 1:
        errs += [level_error(C, p, l) for l in range(1, 4)]
        return ConcatAnalytics(threshold, errs, None, None)
    level = 0
    while errs[-1] * M >= 1:
        level += 1
        if level > max_levels:
            raise RuntimeError("level count did not converge")
        errs.append(level_error(C, p, level))
    return ConcatAnalytics(threshold, errs, level, N**level * M)
