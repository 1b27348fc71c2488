"""Z2 chain complexes for surface codes.

Index conventions (stable, used by fixtures and CSV output):

torus, size n
    vertex (r, c) -> r*n + c
    edge   h(r, c) -> 2*(r*n + c)      joins (r, c) and (r, c+1)
           v(r, c) -> 2*(r*n + c) + 1  joins (r, c) and (r+1, c)
    face   (r, c) -> r*n + c           bounded by h(r,c), h(r+1,c), v(r,c), v(r,c+1)

planar, size n
    vertices form n rows by n-1 columns; each row has n horizontal edges,
    the outer two dangling (one endpoint) so the left and right sides are
    rough.  Edges are ordered row-major by (row, col, orientation) with
    horizontal before vertical.  Face (r, c), r < n-1, c < n, sits between
    rows r and r+1 and horizontal position c.

polygon_sphere, size n
    vertex k, edge k joins k and k+1 (mod n), two faces bounded by every edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2


@dataclass(frozen=True, eq=False)
class Chain:
    """A GF(2) chain: ``dim`` counts primal cell dimension (dual chains keep their own)."""

    dim: int
    bits: np.ndarray
    dual: bool = False

    def __post_init__(self) -> None:
        if self.dim not in (0, 1, 2, 3):
            raise ValueError(f"chain dimension must be 0..3, got {self.dim}")
        b = np.asarray(self.bits, dtype=np.uint8) & 1
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    def __add__(self, other: Chain) -> Chain:
        if (self.dim, self.dual) != (other.dim, other.dual) or self.bits.shape != other.bits.shape:
            raise ValueError("cannot add chains of different type")
        return Chain(self.dim, self.bits ^ other.bits, self.dual)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.dim, self.dual) == (other.dim, other.dual) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.dim, self.dual, self.bits.tobytes()))

    def dot(self, other: Chain) -> int:
        return int(np.dot(self.bits.astype(np.int64), other.bits.astype(np.int64)) & 1)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def is_zero(self) -> bool:
        return not self.bits.any()


@dataclass(frozen=True)
class HomologyClass:
    """Bits of the class in the fixed reference basis; index = sum bit_i 2^i."""

    bits: tuple[int, ...]

    @property
    def index(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @property
    def is_trivial(self) -> bool:
        return not any(self.bits)

    @property
    def name(self) -> str:
        if self.is_trivial:
            return "trivial"
        return "".join(f"h{i + 1}" for i, b in enumerate(self.bits) if b)

    def __xor__(self, other: HomologyClass) -> HomologyClass:
        return HomologyClass(tuple(a ^ b for a, b in zip(self.bits, other.bits)))


@dataclass(eq=False)
class Surface:
    """A 2D cell complex with boundary matrices d1 (V x E) and d2 (E x F)."""

    kind: str
    size: int
    d1: np.ndarray
    d2: np.ndarray
    genus: int | None = None
    # dual cycles pairing with primal cycles, one row per nontrivial direction
    cocycle_refs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), np.uint8))
    # primal cycles pairing with dual cycles
    cycle_refs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), np.uint8))
    boundary_roles: dict[str, str] = field(default_factory=dict)
    is_dual: bool = False

    def __post_init__(self) -> None:
        self.d1 = gf2.as_bits(self.d1)
        self.d2 = gf2.as_bits(self.d2)
        for m in (self.d1, self.d2):
            m.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return int(self.d1.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.d1.shape[1])

    @property
    def n_faces(self) -> int:
        return int(self.d2.shape[1])

    @property
    def is_closed(self) -> bool:
        return self.genus is not None

    @property
    def euler_characteristic(self) -> int:
        return self.n_faces + self.n_vertices - self.n_edges

    @cached_property
    def edge_vertices(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in np.flatnonzero(self.d1[:, e])) for e in range(self.n_edges)]

    @cached_property
    def face_edges(self) -> list[tuple[int, ...]]:
        return [tuple(int(e) for e in np.flatnonzero(self.d2[:, f])) for f in range(self.n_faces)]

    @cached_property
    def vertex_edges(self) -> list[tuple[int, ...]]:
        return [tuple(int(e) for e in np.flatnonzero(self.d1[v])) for v in range(self.n_vertices)]

    @cached_property
    def _d2_solver(self) -> gf2.Solver:
        return gf2.Solver(self.d2)

    @cached_property
    def _dual_d2_solver(self) -> gf2.Solver:
        # dual 2-cells are primal vertices
        return gf2.Solver(self.d1.T)

    def chain(self, dim: int, support=(), *, dual: bool = False) -> Chain:
        sizes = {0: self.n_vertices, 1: self.n_edges, 2: self.n_faces}
        # dual k-cells are primal (2-k)-cells
        length = sizes[2 - dim] if dual else sizes[dim]
        bits = np.zeros(length, np.uint8)
        bits[list(support)] = 1
        return Chain(dim, bits, dual)

    def dual(self) -> Surface:
        roles = {k: ("smooth" if v == "rough" else "rough") for k, v in self.boundary_roles.items()}
        return Surface(
            kind=self.kind,
            size=self.size,
            d1=self.d2.T.copy(),
            d2=self.d1.T.copy(),
            genus=self.genus,
            cocycle_refs=self.cycle_refs,
            cycle_refs=self.cocycle_refs,
            boundary_roles=roles,
            is_dual=not self.is_dual,
        )

    def dump(self) -> str:
        """Adjacency text: one ``edge e: u v`` and ``face f: e...`` line per cell."""
        lines = [f"# {self.kind} n={self.size} V={self.n_vertices} E={self.n_edges} F={self.n_faces}"]
        for e, vs in enumerate(self.edge_vertices):
            lines.append(f"edge {e}: " + " ".join(map(str, vs)))
        for f, es in enumerate(self.face_edges):
            lines.append(f"face {f}: " + " ".join(map(str, es)))
        return "\n".join(lines) + "\n"


# builders -----------------------------------------------------------------


def torus_edge(n: int, r: int, c: int, o: int) -> int:
    return 2 * ((r % n) * n + (c % n)) + o


def build_surface(kind: str, n: int) -> Surface:
    if n < 2:
        raise ValueError(f"size must be >= 2, got {n}")
    if kind == "torus":
        return _torus(n)
    if kind == "planar":
        return _planar(n)
    if kind == "polygon_sphere":
        return _polygon(n)
    raise ValueError(f"unknown surface kind {kind!r}")


def _torus(n: int) -> Surface:
    nv = n * n
    d1 = np.zeros((nv, 2 * nv), np.uint8)
    d2 = np.zeros((2 * nv, nv), np.uint8)
    for r in range(n):
        for c in range(n):
            v = r * n + c
            h, vert = torus_edge(n, r, c, 0), torus_edge(n, r, c, 1)
            d1[v, h] ^= 1
            d1[r * n + (c + 1) % n, h] ^= 1
            d1[v, vert] ^= 1
            d1[((r + 1) % n) * n + c, vert] ^= 1
            for e in (h, torus_edge(n, r + 1, c, 0), vert, torus_edge(n, r, c + 1, 1)):
                d2[e, v] ^= 1
    cocycles = np.zeros((2, 2 * nv), np.uint8)
    cycles = np.zeros((2, 2 * nv), np.uint8)
    for k in range(n):
        cocycles[0, torus_edge(n, k, 0, 0)] = 1  # dual loop crossing every row
        cocycles[1, torus_edge(n, 0, k, 1)] = 1
        cycles[0, torus_edge(n, 0, k, 0)] = 1  # horizontal wrap
        cycles[1, torus_edge(n, k, 0, 1)] = 1  # vertical wrap
    return Surface("torus", n, d1, d2, genus=1, cocycle_refs=cocycles, cycle_refs=cycles)


class PlanarIndex:
    """Edge/vertex/face numbering for the planar lattice of size n."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.h: dict[tuple[int, int], int] = {}
        self.v: dict[tuple[int, int], int] = {}
        e = 0
        for r in range(n):
            for c in range(n):
                self.h[(r, c)] = e
                e += 1
                if r < n - 1 and c < n - 1:
                    self.v[(r, c)] = e
                    e += 1
        self.n_edges = e
        self.n_vertices = n * (n - 1)
        self.n_faces = (n - 1) * n

    def vertex(self, r: int, c: int) -> int:
        return r * (self.n - 1) + c

    def face(self, r: int, c: int) -> int:
        return r * self.n + c


def _planar(n: int) -> Surface:
    idx = PlanarIndex(n)
    d1 = np.zeros((idx.n_vertices, idx.n_edges), np.uint8)
    d2 = np.zeros((idx.n_edges, idx.n_faces), np.uint8)
    for (r, c), e in idx.h.items():
        if c >= 1:
            d1[idx.vertex(r, c - 1), e] = 1
        if c <= n - 2:
            d1[idx.vertex(r, c), e] = 1
    for (r, c), e in idx.v.items():
        d1[idx.vertex(r, c), e] = 1
        d1[idx.vertex(r + 1, c), e] = 1
    for r in range(n - 1):
        for c in range(n):
            f = idx.face(r, c)
            d2[idx.h[(r, c)], f] = 1
            d2[idx.h[(r + 1, c)], f] = 1
            if c >= 1:
                d2[idx.v[(r, c - 1)], f] = 1
            if c <= n - 2:
                d2[idx.v[(r, c)], f] = 1
    cocycle = np.zeros((1, idx.n_edges), np.uint8)
    cycle = np.zeros((1, idx.n_edges), np.uint8)
    for k in range(n):
        cocycle[0, idx.h[(k, 0)]] = 1  # dual path top to bottom through column 0
        cycle[0, idx.h[(0, k)]] = 1  # top row, rough to rough
    roles = {"left": "rough", "right": "rough", "top": "smooth", "bottom": "smooth"}
    return Surface("planar", n, d1, d2, genus=None, cocycle_refs=cocycle, cycle_refs=cycle, boundary_roles=roles)


def _polygon(n: int) -> Surface:
    d1 = np.zeros((n, n), np.uint8)
    for k in range(n):
        d1[k, k] ^= 1
        d1[(k + 1) % n, k] ^= 1
    d2 = np.ones((n, 2), np.uint8)
    empty = np.zeros((0, n), np.uint8)
    return Surface("polygon_sphere", n, d1, d2, genus=0, cocycle_refs=empty, cycle_refs=empty)


# operations ---------------------------------------------------------------


def boundary(s, c: Chain) -> Chain:
    """Boundary of a primal or dual chain on a Surface or CubicComplex."""
    if isinstance(s, CubicComplex):
        return s.boundary(c)
    if c.dim == 0:
        raise ValueError("0-chains have no boundary")
    if not c.dual:
        m = s.d1 if c.dim == 1 else s.d2
    else:
        # dual edges are primal edges, dual faces are primal vertices
        m = s.d2.T if c.dim == 1 else s.d1.T
    if m.shape[1] != c.bits.shape[0]:
        raise ValueError("chain does not live on this complex")
    out = (m.astype(np.int64) @ c.bits.astype(np.int64)) & 1
    return Chain(c.dim - 1, out.astype(np.uint8), c.dual)


def coboundary(s: Surface, c: Chain) -> Chain:
    """delta of a primal chain: vertex -> incident edges, edge -> adjacent faces."""
    if c.dual or c.dim == 2:
        raise ValueError("coboundary is defined here for primal 0- and 1-chains")
    m = s.d1.T if c.dim == 0 else s.d2.T
    out = (m.astype(np.int64) @ c.bits.astype(np.int64)) & 1
    return Chain(c.dim + 1, out.astype(np.uint8))


def classify_cycle(s: Surface, c: Chain) -> HomologyClass:
    """Homology class of a (primal or dual) 1-cycle.

    Solves c = boundary(c2); trivial when solvable, otherwise the class bits are
    the inner products with the fixed reference cycles of the other lattice.
    """
    if c.dim != 1:
        raise ValueError("expected a 1-chain")
    if not boundary(s, c).is_zero():
        raise ValueError("input is not a cycle")
    if c.dual:
        refs = s.cycle_refs
        solver = s._dual_d2_solver
    else:
        refs = s.cocycle_refs
        solver = s._d2_solver
    bits = tuple(int(b) for b in ((refs.astype(np.int64) @ c.bits.astype(np.int64)) & 1)) if refs.size else ()
    trivial = solver.contains(c.bits)
    if trivial != (not any(bits)):
        raise RuntimeError("reference cycles do not span homology for this surface")
    return HomologyClass(bits)


def dual(s: Surface) -> Surface:
    return s.dual()


# 3D space-time complex ------------------------------------------------------


class CubicComplex:
    """Product of a 2D complex S with a path of ``layers`` time intervals.

    Built on S = dual of the code surface, so 3-cells are (vertex, layer)
    syndrome slots, vertical 2-cells are (edge, layer) data errors and
    horizontal 2-cells at interior time points 1..layers-1 are measurement
    flips between consecutive layers.  Boundaries follow
    d(a x b) = da x b + a x db over GF(2).
    """

    def __init__(self, base: Surface, layers: int) -> None:
        if layers < 1:
            raise ValueError("need at least one layer")
        self.base = base
        self.layers = layers
        s = base
        nt0, nt1 = layers + 1, layers
        it = np.zeros((nt0, nt1), np.uint8)
        for t in range(nt1):
            it[t, t] = 1
            it[t + 1, t] = 1
        i0, i1 = np.eye(nt0, dtype=np.uint8), np.eye(nt1, dtype=np.uint8)
        s0, s1, s2 = (np.eye(k, dtype=np.uint8) for k in (s.n_vertices, s.n_edges, s.n_faces))
        kron = lambda a, b: np.kron(a, b).astype(np.uint8)  # noqa: E731
        z = np.zeros
        # C1 = S1xI0 + S0xI1 ; C2 = S2xI0 + S1xI1 ; C3 = S2xI1
        self.d1 = np.hstack([kron(s.d1, i0), kron(s0, it)])
        top = np.hstack([kron(s.d2, i0), kron(s1, it)])
        bot = np.hstack([z((s.n_vertices * nt1, s.n_faces * nt0), np.uint8), kron(s.d1, i1)])
        self.d2 = np.vstack([top, bot])
        self.d3 = np.vstack([kron(s2, it), kron(s.d2, i1)])
        self._nt0, self._nt1 = nt0, nt1

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.d1.shape[0], self.d1.shape[1], self.d2.shape[1], self.d3.shape[1])

    def boundary(self, c: Chain) -> Chain:
        mats = {1: self.d1, 2: self.d2, 3: self.d3}
        if c.dim == 0:
            raise ValueError("0-chains have no boundary")
        m = mats[c.dim]
        out = (m.astype(np.int64) @ c.bits.astype(np.int64)) & 1
        return Chain(c.dim - 1, out.astype(np.uint8))

    # identification with syndrome data ----------------------------------------

    def horizontal_face(self, site: int, time_point: int) -> int:
        """2-cell index of (base face ``site``) x (time point)."""
        return site * self._nt0 + time_point

    def vertical_face(self, edge: int, layer: int) -> int:
        return self.base.n_faces * self._nt0 + edge * self._nt1 + layer

    def cube(self, site: int, layer: int) -> int:
        return site * self._nt1 + layer

    def error_chain(self, data: np.ndarray, meas: np.ndarray) -> Chain:
        """2-chain for data errors data[t, e] (layer t) and flips meas[t, k] (between layers t and t+1)."""
        bits = np.zeros(self.d2.shape[1], np.uint8)
        for t, e in zip(*np.nonzero(data)):
            bits[self.vertical_face(int(e), int(t))] ^= 1
        for t, k in zip(*np.nonzero(meas)):
            bits[self.horizontal_face(int(k), int(t) + 1)] ^= 1
        return Chain(2, bits)

    def defects(self, chain: Chain) -> np.ndarray:
        """Cubes flagged by a 2-chain, as a (layers, sites) array: the transpose of d3."""
        flags = (self.d3.T.astype(np.int64) @ chain.bits.astype(np.int64)) & 1
        return flags.reshape(self.base.n_faces, self._nt1).T.astype(np.uint8)
