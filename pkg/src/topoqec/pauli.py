"""Pauli products in symplectic (x|z) form.

An operator is stored as ``i**phase * P_0 ⊗ ... ⊗ P_{n-1}`` where qubit j
carries X for (x, z) = (1, 0), Z for (0, 1) and Y for (1, 1).  The phase
convention Y = iXZ is used everywhere, so X·Z = -iY.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LETTERS = "IXZY"  # index = x + 2 z
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def product_phase(x1, z1, x2, z2) -> np.ndarray:
    """Exponent of i picked up by sigma(x1,z1) * sigma(x2,z2), per qubit.

    Works elementwise on integer arrays of any matching shape.
    """
    x1 = np.asarray(x1, dtype=np.int64)
    z1 = np.asarray(z1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    y = x1 & z1
    xo = x1 & (1 - z1)
    zo = (1 - x1) & z1
    return y * (z2 - x2) + xo * z2 * (2 * x2 - 1) + zo * x2 * (1 - 2 * z2)


@dataclass(frozen=True, eq=False)
class PauliProduct:
    """Immutable n-qubit Pauli operator with a phase in {1, i, -1, -i}."""

    x_bits: np.ndarray
    z_bits: np.ndarray
    phase: int = 0

    def __post_init__(self) -> None:
        x = np.asarray(self.x_bits, dtype=np.uint8) & 1
        z = np.asarray(self.z_bits, dtype=np.uint8) & 1
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x_bits and z_bits must be 1D arrays of equal length")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return int(self.x_bits.shape[0])

    @classmethod
    def identity(cls, n: int) -> PauliProduct:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliProduct:
        return cls.from_support(n, {qubit: letter})

    @classmethod
    def from_support(cls, n: int, support: dict[int, str], phase: int = 0) -> PauliProduct:
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        for q, letter in support.items():
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for n={n}")
            code = _LETTERS.index(letter.upper())
            x[q] = code & 1
            z[q] = code >> 1
        return cls(x, z, phase)

    @classmethod
    def from_xz(cls, kind: str, bits, phase: int = 0) -> PauliProduct:
        """All-X or all-Z operator on the support of a bit-vector."""
        bits = np.asarray(bits, dtype=np.uint8) & 1
        zero = np.zeros_like(bits)
        if kind == "X":
            return cls(bits, zero, phase)
        if kind == "Z":
            return cls(zero, bits, phase)
        raise ValueError(f"basis must be 'X' or 'Z', got {kind!r}")

    @classmethod
    def parse(cls, text: str) -> PauliProduct:
        """Parse ``[+|-|+i|-i]{I,X,Y,Z}*``; a missing sign means +."""
        s = text.strip()
        phase = 0
        for prefix, ph in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)):
            if s.startswith(prefix):
                phase = ph
                s = s[len(prefix) :]
                break
        if any(ch not in _LETTERS for ch in s.upper()):
            raise ValueError(f"invalid Pauli string {text!r}")
        codes = np.array([_LETTERS.index(ch) for ch in s.upper()], dtype=np.uint8)
        return cls(codes & 1, codes >> 1, phase)

    def __str__(self) -> str:
        letters = "".join(_LETTERS[int(a) + 2 * int(b)] for a, b in zip(self.x_bits, self.z_bits))
        return _PHASE_TEXT[self.phase] + letters

    def __repr__(self) -> str:
        return f"PauliProduct({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliProduct):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.phase, self.x_bits.tobytes(), self.z_bits.tobytes()))

    def __mul__(self, other: PauliProduct) -> PauliProduct:
        return multiply(self, other)

    def __neg__(self) -> PauliProduct:
        return PauliProduct(self.x_bits, self.z_bits, self.phase + 2)

    def equal_up_to_phase(self, other: PauliProduct) -> bool:
        return np.array_equal(self.x_bits, other.x_bits) and np.array_equal(self.z_bits, other.z_bits)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    def letter(self, qubit: int) -> str:
        return _LETTERS[int(self.x_bits[qubit]) + 2 * int(self.z_bits[qubit])]

    def symplectic(self) -> np.ndarray:
        """The stacked (x|z) bit row."""
        return np.concatenate([self.x_bits, self.z_bits])

    def tensor(self, other: PauliProduct) -> PauliProduct:
        return PauliProduct(
            np.concatenate([self.x_bits, other.x_bits]),
            np.concatenate([self.z_bits, other.z_bits]),
            self.phase + other.phase,
        )

    def commutes(self, other: PauliProduct) -> bool:
        return commutes(self, other)


def _check_sizes(p: PauliProduct, q: PauliProduct) -> None:
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")


def multiply(p: PauliProduct, q: PauliProduct) -> PauliProduct:
    """Group product p·q with exact phase."""
    _check_sizes(p, q)
    extra = int(product_phase(p.x_bits, p.z_bits, q.x_bits, q.z_bits).sum())
    return PauliProduct(p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, p.phase + q.phase + extra)


def symplectic_product(p: PauliProduct, q: PauliProduct) -> int:
    _check_sizes(p, q)
    return int((np.dot(p.x_bits, q.z_bits.astype(np.int64)) + np.dot(p.z_bits, q.x_bits.astype(np.int64))) & 1)


def commutes(p: PauliProduct, q: PauliProduct) -> bool:
    return symplectic_product(p, q) == 0


def from_chain(surface, chain, basis: str) -> PauliProduct:
    """W(c) = prod_l W_l^{c_l} for a (primal or dual) 1-chain, one qubit per edge."""
    if chain.dim != 1:
        raise ValueError(f"expected a 1-chain, got dimension {chain.dim}")
    if chain.bits.shape[0] != surface.n_edges:
        raise ValueError("chain does not live on this surface")
    return PauliProduct.from_xz(basis, chain.bits)
