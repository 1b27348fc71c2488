"""Surface codes built from chain complexes: layouts, syndromes, residual classes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .chain_complex import Chain, HomologyClass, Surface, build_surface, classify_cycle
from .pauli import PauliProduct
from .stabilizer import StabilizerTableau

CODE_KINDS = ("toric", "planar", "bitflip")


@dataclass(frozen=True)
class Syndrome:
    """Flagged check sites: star (vertex) checks and plaquette (face) checks."""

    vertices: tuple[int, ...] = ()
    faces: tuple[int, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.faces

    def __xor__(self, other: Syndrome) -> Syndrome:
        return Syndrome(
            tuple(sorted(set(self.vertices) ^ set(other.vertices))),
            tuple(sorted(set(self.faces) ^ set(other.faces))),
        )


@dataclass(eq=False)
class SurfaceCodeLayout:
    """Stabilizer and logical chains of a concrete code, one qubit per edge.

    ``x_checks`` rows are X-type generators (stars), ``z_checks`` rows are
    Z-type generators (plaquettes; vertex parity checks for the bit-flip
    code).  Row i of ``logical_z`` anticommutes with row i of ``logical_x``.
    """

    kind: str
    n: int
    surface: Surface
    x_checks: np.ndarray
    z_checks: np.ndarray
    logical_z: np.ndarray
    logical_x: np.ndarray
    x_check_sites: np.ndarray
    z_check_sites: np.ndarray
    z_check_on_vertices: bool = False
    defects: list = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        return self.surface.n_edges

    @property
    def k(self) -> int:
        return int(self.logical_z.shape[0])

    @property
    def n_generators(self) -> int:
        return gf2.rank(self.x_checks) + gf2.rank(self.z_checks)

    def stabilizer_generators(self) -> list[PauliProduct]:
        gens = [PauliProduct.from_xz("Z", r) for r in self.z_checks]
        gens += [PauliProduct.from_xz("X", r) for r in self.x_checks]
        return gens

    def logical_operators(self) -> tuple[list[PauliProduct], list[PauliProduct]]:
        return (
            [PauliProduct.from_xz("X", r) for r in self.logical_x],
            [PauliProduct.from_xz("Z", r) for r in self.logical_z],
        )

    def tableau(self) -> StabilizerTableau:
        """The code space as a (mixed) stabilizer group with independent generators."""
        return StabilizerTableau.from_generators(self.stabilizer_generators(), reduce=True)

    def checks_for(self, error_basis: str) -> np.ndarray:
        """Parity checks that detect errors of the given Pauli type."""
        if error_basis == "Z":
            return self.x_checks
        if error_basis == "X":
            return self.z_checks
        raise ValueError(f"basis must be 'X' or 'Z', got {error_basis!r}")

    def conjugate_logicals(self, error_basis: str) -> np.ndarray:
        """Logicals of the opposite type, whose parities classify a residual."""
        return self.logical_x if error_basis == "Z" else self.logical_z


def build_code(kind: str, n: int) -> SurfaceCodeLayout:
    if n < 2:
        raise ValueError(f"size must be >= 2, got {n}")
    if kind in ("toric", "planar"):
        s = build_surface("torus" if kind == "toric" else "planar", n)
        return SurfaceCodeLayout(
            kind=kind,
            n=n,
            surface=s,
            x_checks=s.d1.copy(),
            z_checks=s.d2.T.copy(),
            logical_z=s.cycle_refs.copy(),
            logical_x=s.cocycle_refs.copy(),
            x_check_sites=np.arange(s.n_vertices),
            z_check_sites=np.arange(s.n_faces),
        )
    if kind == "bitflip":
        s = build_surface("polygon_sphere", n)
        lz = np.zeros((1, n), np.uint8)
        lz[0, 0] = 1
        # Z(delta v_k) for k = 1..n-1; the last vertex check is their product
        return SurfaceCodeLayout(
            kind=kind,
            n=n,
            surface=s,
            x_checks=np.zeros((0, n), np.uint8),
            z_checks=s.d1[1:].copy(),
            logical_z=lz,
            logical_x=np.ones((1, n), np.uint8),
            x_check_sites=np.zeros(0, np.int64),
            z_check_sites=np.arange(1, n),
            z_check_on_vertices=True,
        )
    raise ValueError(f"unknown code kind {kind!r}; expected one of {CODE_KINDS}")


def _bits(code: SurfaceCodeLayout, error) -> np.ndarray:
    if isinstance(error, Chain):
        if error.dim != 1:
            raise ValueError("error must be a 1-chain")
        bits = error.bits
    else:
        bits = gf2.as_bits(error)
    if bits.shape != (code.n_qubits,):
        raise ValueError(f"error chain has length {bits.shape}, code has {code.n_qubits} qubits")
    return bits


def syndrome_of(code: SurfaceCodeLayout, error, basis: str) -> Syndrome:
    """Checks flipped by an error chain of Pauli type ``basis``."""
    bits = _bits(code, error)
    checks = code.checks_for(basis)
    flags = np.flatnonzero((checks.astype(np.int64) @ bits.astype(np.int64)) & 1)
    if basis == "Z":
        return Syndrome(vertices=tuple(int(s) for s in code.x_check_sites[flags]))
    sites = tuple(int(s) for s in code.z_check_sites[flags])
    return Syndrome(vertices=sites) if code.z_check_on_vertices else Syndrome(faces=sites)


def residual_class(code: SurfaceCodeLayout, residual, basis: str) -> HomologyClass:
    """Logical class of error + recovery; raises if it still has a syndrome."""
    bits = _bits(code, residual)
    if ((code.checks_for(basis).astype(np.int64) @ bits.astype(np.int64)) & 1).any():
        raise ValueError("residual has a nonzero boundary")
    if code.kind in ("toric", "planar"):
        return classify_cycle(code.surface, Chain(1, bits, dual=(basis == "X")))
    pairs = (code.conjugate_logicals(basis).astype(np.int64) @ bits.astype(np.int64)) & 1
    return HomologyClass(tuple(int(b) for b in pairs))


def logical_name(cls: HomologyClass, basis: str) -> str:
    """Name of the logical operator a residual class applies, e.g. ``Z1Z2``."""
    if cls.is_trivial:
        return "I"
    return "".join(f"{basis}{i + 1}" for i, b in enumerate(cls.bits) if b)


def code_distance(code: SurfaceCodeLayout, max_rank: int = 20) -> int:
    """Minimum weight of a nontrivial logical by enumerating stabilizer cosets."""
    best = None
    for checks, logicals in ((code.z_checks, code.logical_z), (code.x_checks, code.logical_x)):
        basis = gf2.row_basis(checks) if checks.size else np.zeros((0, code.n_qubits), np.uint8)
        if basis.shape[0] > max_rank:
            raise ValueError(f"stabilizer rank {basis.shape[0]} too large for exhaustive distance")
        group = gf2.span_elements(basis) if basis.shape[0] else np.zeros((1, code.n_qubits), np.uint8)
        combos = gf2.span_elements(logicals)[1:]
        for lbits in combos:
            w = int(np.count_nonzero(group ^ lbits, axis=1).min())
            best = w if best is None else min(best, w)
    return int(best)


def code_info(code: SurfaceCodeLayout) -> dict:
    exact = code.n <= 4
    return {
        "code": code.kind,
        "size": code.n,
        "qubits": code.n_qubits,
        "generators": code.n_generators,
        "logical_pairs": code.k,
        "distance": code_distance(code) if exact else (1 if code.kind == "bitflip" else code.n),
        "distance_exact": exact,
    }
