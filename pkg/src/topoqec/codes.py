"""Small stabilizer-code fixtures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliProduct, commutes
from .stabilizer import StabilizerTableau

HAMMING_H = np.array(
    [
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ],
    dtype=np.uint8,
)

# H_x as printed in the source table; it is not orthogonal to RM15_HZ below.
RM15_HX_PRINTED = np.array(
    [[int(c) for c in row] for row in ("100001100111101", "010010101011011", "001100101100111", "001011010010111")],
    dtype=np.uint8,
)

# Doubly-even part of the orthogonal complement of RM15_HZ: qubit j carries
# the binary label j + 1, one row per bit.
RM15_HX = np.array(
    [[int(c) for c in row] for row in ("000000011111111", "000111100001111", "011001100110011", "101010101010101")],
    dtype=np.uint8,
)

RM15_HZ = np.array(
    [
        [int(c) for c in row]
        for row in (
            "001100010000001",
            "010010010000001",
            "100001010000001",
            "110100100000000",
            "010100001000001",
            "100100000100001",
            "110000010010000",
            "110000000001001",
            "100100010000100",
            "010100010000010",
        )
    ],
    dtype=np.uint8,
)


@dataclass(frozen=True)
class CodeFixture:
    name: str
    n: int
    stabilizers: tuple[PauliProduct, ...]
    logical_x: tuple[PauliProduct, ...]
    logical_z: tuple[PauliProduct, ...]

    def __post_init__(self) -> None:
        gens = self.stabilizers
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if not commutes(a, b):
                    raise ValueError(f"{self.name}: generators {a} and {b} anticommute")
        for lx, lz in zip(self.logical_x, self.logical_z):
            for s in gens:
                if not (commutes(lx, s) and commutes(lz, s)):
                    raise ValueError(f"{self.name}: logical operator fails to commute with {s}")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if commutes(lx, lz) == (i == j):
                    raise ValueError(f"{self.name}: logical pair ({i}, {j}) has wrong commutation")

    @property
    def k(self) -> int:
        return len(self.logical_x)

    def tableau(self) -> StabilizerTableau:
        """The stabilizer group, keeping only independent generators."""
        return StabilizerTableau.from_generators(list(self.stabilizers), reduce=True)

    def syndrome(self, error: PauliProduct) -> tuple[int, ...]:
        return tuple(0 if commutes(error, s) else 1 for s in self.stabilizers)


def _css_rows(h, letter: str) -> tuple[PauliProduct, ...]:
    return tuple(PauliProduct.from_xz(letter, row) for row in np.asarray(h, dtype=np.uint8))


def _fixture(name: str, gens: list[str], lx: list[str], lz: list[str]) -> CodeFixture:
    parse = PauliProduct.parse
    ps = tuple(parse(g) for g in gens)
    return CodeFixture(name, ps[0].n, ps, tuple(parse(g) for g in lx), tuple(parse(g) for g in lz))


def code_fixture(name: str) -> CodeFixture:
    if name == "bitflip3":
        return _fixture(name, ["ZZI", "IZZ"], ["XXX"], ["ZII"])
    if name == "phaseflip3":
        # Hadamard image of the bit-flip code
        return _fixture(name, ["XXI", "IXX"], ["ZZZ"], ["XII"])
    if name == "shor9":
        return _fixture(
            name,
            ["XXXXXXIII", "IIIXXXXXX", "ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ"],
            ["XXXXXXXXX"],
            ["ZZZZZZZZZ"],
        )
    if name == "five_qubit":
        return _fixture(name, ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], ["XXXXX"], ["ZZZZZ"])
    if name == "steane7":
        return _fixture(
            name,
            ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
            ["XXXXXXX"],
            ["ZZZZZZZ"],
        )
    if name == "reed_muller15":
        gens = _css_rows(RM15_HX, "X") + _css_rows(RM15_HZ, "Z")
        ones = np.ones(15, np.uint8)
        return CodeFixture(name, 15, gens, (PauliProduct.from_xz("X", ones),), (PauliProduct.from_xz("Z", ones),))
    raise KeyError(f"unknown code fixture {name!r}")


FIXTURE_NAMES = ("bitflip3", "phaseflip3", "shor9", "five_qubit", "steane7", "reed_muller15")
