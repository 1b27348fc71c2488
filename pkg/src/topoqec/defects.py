"""Defect-pair logical qubits on a smooth-boundary patch, simulated on the tableau.

The patch has m x m plaquettes with vertices (r, c), 0 <= r, c <= m.  Every
boundary is smooth, so the vacuum (all plaquettes and stars +1) is a unique
state.  A primal defect is a set of faces whose interior edges have been
measured in X; a dual defect is a set of vertices whose interior edges have
been measured in Z.

Random measurement outcomes are never corrected physically.  Whenever an
outcome differs from the reference branch (all random outcomes +1), the
generator that maps one branch onto the other is multiplied into a Pauli
frame F.  The simulated state is F|ideal>, so an ideal stabilizer O shows
up in the tableau with sign (-1)^{[F, O]}.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .chain_complex import Surface
from .pauli import PauliProduct, symplectic_product
from .stabilizer import StabilizerTableau

PRIMAL = "primal"
DUAL = "dual"

OPERATIONS = ("create_pair", "expand", "contract", "move", "measure_Z", "prepare_X", "measure_X")


class DefectError(ValueError):
    pass


class SmoothPatch:
    """Geometry and numbering of the m x m smooth patch."""

    def __init__(self, m: int) -> None:
        if m < 2:
            raise ValueError("patch needs at least 2 x 2 faces")
        self.m = m
        self.h: dict[tuple[int, int], int] = {}
        self.v: dict[tuple[int, int], int] = {}
        e = 0
        for r in range(m + 1):
            for c in range(m + 1):
                if c < m:
                    self.h[(r, c)] = e
                    e += 1
                if r < m:
                    self.v[(r, c)] = e
                    e += 1
        self.n_edges = e
        nv = (m + 1) ** 2
        d1 = np.zeros((nv, e), np.uint8)
        d2 = np.zeros((e, m * m), np.uint8)
        for (r, c), k in self.h.items():
            d1[self.vertex(r, c), k] = 1
            d1[self.vertex(r, c + 1), k] = 1
        for (r, c), k in self.v.items():
            d1[self.vertex(r, c), k] = 1
            d1[self.vertex(r + 1, c), k] = 1
        for r in range(m):
            for c in range(m):
                for k in self.face_edge_list(r, c):
                    d2[k, self.face(r, c)] = 1
        roles = {side: "smooth" for side in ("left", "right", "top", "bottom")}
        self.surface = Surface("smooth_patch", m, d1, d2, genus=None, boundary_roles=roles)

    def vertex(self, r: int, c: int) -> int:
        return r * (self.m + 1) + c

    def vertex_rc(self, v: int) -> tuple[int, int]:
        return divmod(v, self.m + 1)

    def face(self, r: int, c: int) -> int:
        return r * self.m + c

    def face_rc(self, f: int) -> tuple[int, int]:
        return divmod(f, self.m)

    def face_edge_list(self, r: int, c: int) -> list[int]:
        return [self.h[(r, c)], self.h[(r + 1, c)], self.v[(r, c)], self.v[(r, c + 1)]]

    def face_corners(self, f: int) -> set[int]:
        r, c = self.face_rc(f)
        return {self.vertex(r + a, c + b) for a in (0, 1) for b in (0, 1)}

    def edge_faces(self, e: int) -> tuple[int, ...]:
        return tuple(int(f) for f in np.flatnonzero(self.surface.d2[e]))

    def edge_vertices(self, e: int) -> tuple[int, ...]:
        return self.surface.edge_vertices[e]


@dataclass(frozen=True)
class DefectRegion:
    kind: str
    cells: frozenset[int]

    def __post_init__(self) -> None:
        if self.kind not in (PRIMAL, DUAL):
            raise DefectError(f"defect kind must be primal or dual, got {self.kind!r}")
        object.__setattr__(self, "cells", frozenset(int(x) for x in self.cells))

    def boundary_edges(self, patch: SmoothPatch) -> np.ndarray:
        """Edge indicator of the boundary cycle (primal) or coboundary (dual)."""
        s = patch.surface
        bits = np.zeros(s.n_faces if self.kind == PRIMAL else s.n_vertices, np.int64)
        bits[list(self.cells)] = 1
        m = s.d2 if self.kind == PRIMAL else s.d1.T
        return ((m.astype(np.int64) @ bits) & 1).astype(np.uint8)

    def interior_edges(self, patch: SmoothPatch) -> set[int]:
        out = set()
        for e in range(patch.n_edges):
            ends = patch.edge_faces(e) if self.kind == PRIMAL else patch.edge_vertices(e)
            if len(ends) == 2 and all(x in self.cells for x in ends):
                out.add(e)
        return out


@dataclass
class ByproductRecord:
    op: str
    defect: str
    operator: str
    outcome: int
    corrected: int
    random: bool


@dataclass
class DefectState:
    patch: SmoothPatch
    tableau: StabilizerTableau
    frame: PauliProduct
    n_ref: int = 0
    defects: dict[str, DefectRegion] = field(default_factory=dict)
    log: list[ByproductRecord] = field(default_factory=list)
    rng: object = None

    @classmethod
    def vacuum(cls, m: int, n_ref: int = 0, rng=None, ref_states: str | None = None) -> DefectState:
        """All plaquettes and stars +1; reference qubits in |0> (or per ``ref_states``: '0' or '+')."""
        patch = SmoothPatch(m)
        s = patch.surface
        n = s.n_edges + n_ref
        gens = []
        for f in range(s.n_faces):
            gens.append(_pad(PauliProduct.from_xz("Z", s.d2[:, f]), n))
        for v in range(s.n_vertices - 1):  # the last star is the product of the others
            gens.append(_pad(PauliProduct.from_xz("X", s.d1[v]), n))
        states = ref_states or "0" * n_ref
        for i, st in enumerate(states):
            gens.append(PauliProduct.single(n, s.n_edges + i, "Z" if st == "0" else "X"))
        t = StabilizerTableau.from_generators(gens)
        return cls(patch, t, PauliProduct.identity(n), n_ref, rng=rng)

    @property
    def n(self) -> int:
        return self.tableau.n

    def edge_op(self, letter: str, edges) -> PauliProduct:
        bits = np.zeros(self.n, np.uint8)
        bits[list(edges)] = 1
        return PauliProduct.from_xz(letter, bits)

    def ref_op(self, letter: str, i: int) -> PauliProduct:
        return PauliProduct.single(self.n, self.patch.n_edges + i, letter)

    # frame-tracked measurement ------------------------------------------------

    def measure(self, p: PauliProduct, op: str = "measure", name: str = "", forced: int | None = None) -> int:
        """Measure p; return the outcome of the reference branch (0 for +1)."""
        anti = self.tableau._anticommuting(p)
        pivot_gen = self.tableau.row(int(anti[0])) if anti.size else None
        m, _prob, _ = self.tableau.measure(p, self.rng, forced if forced is not None else (0 if self.rng is None else None))
        corrected = m ^ symplectic_product(self.frame, p)
        random = pivot_gen is not None
        if random and corrected:
            self.frame = self.frame * pivot_gen
            corrected = 0
        self.log.append(ByproductRecord(op, name, str(p), m, corrected, random))
        return corrected

    def holds(self, p: PauliProduct) -> bool:
        """Is p (with its sign) a stabilizer of the reference-branch state?"""
        sign = self.tableau.membership(p)
        if sign is None:
            return False
        expected = -1 if symplectic_product(self.frame, p) else 1
        return sign == expected

    # geometry checks ---------------------------------------------------------

    def _check_region(self, name: str, region: DefectRegion) -> None:
        patch = self.patch
        m = patch.m
        if not region.cells:
            raise DefectError("defect region is empty")
        if region.kind == PRIMAL:
            for f in region.cells:
                if not 0 <= f < m * m:
                    raise DefectError(f"face {f} out of range")
                r, c = patch.face_rc(f)
                if not (1 <= r <= m - 2 and 1 <= c <= m - 2):
                    raise DefectError(f"primal defect face {(r, c)} touches the outer boundary")
        else:
            for v in region.cells:
                if not 0 <= v < (m + 1) ** 2:
                    raise DefectError(f"vertex {v} out of range")
                r, c = patch.vertex_rc(v)
                if not (1 <= r <= m - 1 and 1 <= c <= m - 1):
                    raise DefectError(f"dual defect vertex {(r, c)} lies on the outer boundary")
        if not _connected(patch, region):
            raise DefectError("defect region is not connected")
        for other_name, other in self.defects.items():
            if other_name == name:
                continue
            if _too_close(patch, region, other):
                raise DefectError(f"defect {name!r} would come within one cell of {other_name!r}")

    # operations ---------------------------------------------------------------

    def create(self, name: str, region: DefectRegion) -> None:
        if name in self.defects:
            raise DefectError(f"defect {name!r} already exists")
        self._check_region(name, region)
        self.defects[name] = region
        letter = "X" if region.kind == PRIMAL else "Z"
        for e in sorted(region.interior_edges(self.patch)):
            self.measure(self.edge_op(letter, [e]), "create", name)

    def expand(self, name: str, cells) -> None:
        old = self.defects[name]
        new = DefectRegion(old.kind, old.cells | frozenset(cells))
        self._check_region(name, new)
        fresh = new.interior_edges(self.patch) - old.interior_edges(self.patch)
        self.defects[name] = new
        letter = "X" if new.kind == PRIMAL else "Z"
        for e in sorted(fresh):  # raster order
            self.measure(self.edge_op(letter, [e]), "expand", name)

    def contract(self, name: str, cells) -> list[int]:
        """Shrink a defect by measuring the plaquettes (stars) of the removed cells."""
        old = self.defects[name]
        removed = sorted(frozenset(cells) & old.cells)
        keep = old.cells - frozenset(removed)
        if keep:
            new = DefectRegion(old.kind, keep)
            if not _connected(self.patch, new):
                raise DefectError("contraction would disconnect the defect")
            self.defects[name] = new
        else:
            del self.defects[name]
        s = self.patch.surface
        outs = []
        for x in removed:
            if old.kind == PRIMAL:
                p = self.edge_op("Z", np.flatnonzero(s.d2[:, x]))
            else:
                p = self.edge_op("X", np.flatnonzero(s.d1[x]))
            outs.append(self.measure(p, "contract", name))
        return outs

    def move(self, name: str, target) -> None:
        """Expand onto ``target`` cells, then contract away the old ones."""
        old = self.defects[name]
        target = frozenset(target)
        self.expand(name, target - old.cells)
        self.contract(name, old.cells - target)

    def create_pair(self, a: str, b: str, region_a: DefectRegion, region_b: DefectRegion) -> None:
        if region_a.kind != region_b.kind:
            raise DefectError("a defect pair needs two defects of the same kind")
        self.create(a, region_a)
        self.create(b, region_b)

    def prepare_x(self, a: str, b: str, region_a: DefectRegion, region_b: DefectRegion) -> None:
        """Primal pair in |+>: open one region spanning both, then contract the bridge."""
        if region_a.kind != PRIMAL or region_b.kind != PRIMAL:
            raise DefectError("prepare_X applies to primal defect pairs")
        if b in self.defects:
            raise DefectError(f"defect {b!r} already exists")
        bridge = _face_path(self.patch, region_a.cells, region_b.cells, blocked=self._blocked_faces())
        self.create(a, DefectRegion(PRIMAL, region_a.cells | region_b.cells | frozenset(bridge)))
        s = self.patch.surface
        for f in bridge:
            self.measure(self.edge_op("Z", np.flatnonzero(s.d2[:, f])), "prepare_X", a)
        self.defects[a] = region_a
        self.defects[b] = region_b

    def _blocked_faces(self) -> set[int]:
        out: set[int] = set()
        for reg in self.defects.values():
            if reg.kind == DUAL:
                for f in range(self.patch.m**2):
                    if self.patch.face_corners(f) & reg.cells:
                        out.add(f)
        return out

    def logical_z(self, a: str, b: str) -> PauliProduct:
        ra, rb = self.defects[a], self.defects[b]
        if ra.kind == PRIMAL:
            return PauliProduct.from_xz("Z", _pad_bits(ra.boundary_edges(self.patch), self.n))
        return self.edge_op("Z", _vertex_path(self.patch, ra.cells, rb.cells))

    def logical_x(self, a: str, b: str) -> PauliProduct:
        ra, rb = self.defects[a], self.defects[b]
        if ra.kind == DUAL:
            return PauliProduct.from_xz("X", _pad_bits(ra.boundary_edges(self.patch), self.n))
        faces = _face_path(self.patch, ra.cells, rb.cells, blocked=self._blocked_faces())
        return self.edge_op("X", _crossed_edges(self.patch, ra.cells, rb.cells, faces))

    def measure_z(self, a: str, b: str) -> int:
        """Logical Z of a pair: annihilate a primal defect, or read a Z string between dual defects."""
        ra = self.defects[a]
        if ra.kind == PRIMAL:
            outs = self.contract(a, ra.cells)
            return int(sum(outs) & 1)
        edges = _vertex_path(self.patch, ra.cells, self.defects[b].cells)
        return int(sum(self.measure(self.edge_op("Z", [e]), "measure_Z", a) for e in edges) & 1)

    def measure_x(self, a: str, b: str) -> int:
        ra = self.defects[a]
        if ra.kind == DUAL:
            outs = self.contract(a, ra.cells)
            return int(sum(outs) & 1)
        faces = _face_path(self.patch, ra.cells, self.defects[b].cells, blocked=self._blocked_faces())
        edges = _crossed_edges(self.patch, ra.cells, self.defects[b].cells, faces)
        return int(sum(self.measure(self.edge_op("X", [e]), "measure_X", a) for e in edges) & 1)


def defect_operation(state: DefectState, op: str, name: str, region: DefectRegion | None = None, **kw):
    """Dispatch one of OPERATIONS; returns the reference-branch outcome for measurements."""
    if op == "create_pair":
        return state.create_pair(name, kw["partner"], region, kw["partner_region"])
    if op == "expand":
        return state.expand(name, region.cells)
    if op == "contract":
        return state.contract(name, region.cells)
    if op == "move":
        return state.move(name, region.cells)
    if op == "prepare_X":
        return state.prepare_x(name, kw["partner"], region, kw["partner_region"])
    if op == "measure_Z":
        return state.measure_z(name, kw["partner"])
    if op == "measure_X":
        return state.measure_x(name, kw["partner"])
    raise DefectError(f"unknown defect operation {op!r}")


# braiding -------------------------------------------------------------------

MIN_BRAID_SIZE = 8


@dataclass
class BraidReport:
    size: int
    braids: int
    checks: dict[str, bool]
    wrong_table_rejected: bool
    measurements: int
    random_outcomes: int

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and self.wrong_table_rejected


def braid_loop(m: int) -> list[tuple[int, int]]:
    """Faces of the ring around the 2 x 2 block at vertex (3, 3), clockwise from (1, 2)."""
    ring = [(1, 2), (1, 3), (1, 4), (2, 4), (3, 4), (4, 4), (4, 3), (4, 2), (4, 1), (3, 1), (2, 1), (1, 1)]
    return ring + [ring[0]]


def braid_cnot_verify(n: int = MIN_BRAID_SIZE, braids: int = 1, rng=None) -> BraidReport:
    """Braid a primal defect around a dual defect and check the logical map.

    Both logical qubits are maximally entangled with a reference qubit, so
    the four Choi stabilizers determine the logical action exactly.  An odd
    number of braids must act as CNOT (primal control, dual target); an even
    number as the identity.
    """
    if n < MIN_BRAID_SIZE:
        raise DefectError(f"lattice size {n} is too small to braid; need at least {MIN_BRAID_SIZE}")
    st = DefectState.vacuum(n, n_ref=2, rng=rng, ref_states="0+")
    p = st.patch
    P = lambda r, c: DefectRegion(PRIMAL, {p.face(r, c)})  # noqa: E731
    D = lambda r, c: DefectRegion(DUAL, {p.vertex(r, c)})  # noqa: E731
    st.create_pair("p1", "p2", P(1, 6), P(1, 2))
    st.create_pair("d1", "d2", D(3, 3), D(3, 6))

    za = PauliProduct.from_xz("Z", _pad_bits(st.defects["p2"].boundary_edges(p), st.n))
    c_bar = [p.v[(1, c)] for c in range(3, 7)]  # dual path p2 -> p1 along face row 1
    xa = st.edge_op("X", c_bar)
    xb = PauliProduct.from_xz("X", _pad_bits(st.defects["d1"].boundary_edges(p), st.n))
    c_path = [p.h[(3, c)] for c in range(3, 6)]  # primal path d1 -> d2 along vertex row 3
    zb = st.edge_op("Z", c_path)
    ra_x, ra_z = st.ref_op("X", 0), st.ref_op("Z", 0)
    rb_x, rb_z = st.ref_op("X", 1), st.ref_op("Z", 1)

    # Bell pairs between each logical qubit and its reference
    st.measure(xa * ra_x, "bell", "p")
    st.measure(zb * rb_z, "bell", "d")

    loop = braid_loop(n)
    for _ in range(braids):
        for r, c in loop[1:]:
            st.move("p2", {p.face(r, c)})

    cnot = {
        "Z_a -> Z_a": za * ra_z,
        "X_a -> X_a X_b": xa * xb * ra_x,
        "Z_b -> Z_a Z_b": za * zb * rb_z,
        "X_b -> X_b": xb * rb_x,
    }
    ident = {
        "Z_a -> Z_a": za * ra_z,
        "X_a -> X_a": xa * ra_x,
        "Z_b -> Z_b": zb * rb_z,
        "X_b -> X_b": xb * rb_x,
    }
    want, other = (cnot, ident) if braids % 2 else (ident, cnot)
    checks = {k: st.holds(v) for k, v in want.items()}
    rejected = not all(st.holds(v) for v in other.values())
    return BraidReport(
        size=n,
        braids=braids,
        checks=checks,
        wrong_table_rejected=rejected,
        measurements=len(st.log),
        random_outcomes=sum(1 for rec in st.log if rec.random),
    )


# helpers ----------------------------------------------------------------------


def _pad(p: PauliProduct, n: int) -> PauliProduct:
    extra = n - p.n
    if extra == 0:
        return p
    z = np.zeros(extra, np.uint8)
    return PauliProduct(np.concatenate([p.x_bits, z]), np.concatenate([p.z_bits, z]), p.phase)


def _pad_bits(bits: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, np.uint8)
    out[: bits.shape[0]] = bits
    return out


def _footprint(patch: SmoothPatch, region: DefectRegion) -> tuple[set[int], set[int]]:
    """(vertices, edges) a defect occupies: face corners and edges, or vertices and stars."""
    s = patch.surface
    verts: set[int] = set()
    edges: set[int] = set()
    if region.kind == PRIMAL:
        for f in region.cells:
            verts |= patch.face_corners(f)
            edges |= set(s.face_edges[f])
    else:
        verts = set(region.cells)
        for v in region.cells:
            edges |= set(s.vertex_edges[v])
    return verts, edges


def _too_close(patch: SmoothPatch, a: DefectRegion, b: DefectRegion) -> bool:
    va, ea = _footprint(patch, a)
    vb, eb = _footprint(patch, b)
    if a.kind == b.kind == PRIMAL:
        return bool(va & vb)
    return bool(ea & eb)


def _connected(patch: SmoothPatch, region: DefectRegion) -> bool:
    cells = set(region.cells)
    start = next(iter(cells))
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in _neighbours(patch, region.kind, x):
            if y in cells and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == cells


def _neighbours(patch: SmoothPatch, kind: str, x: int) -> list[int]:
    s = patch.surface
    out = []
    if kind == PRIMAL:
        for e in s.face_edges[x]:
            out += [f for f in patch.edge_faces(e) if f != x]
    else:
        for e in s.vertex_edges[x]:
            out += [v for v in patch.edge_vertices(e) if v != x]
    return out


def _face_path(patch: SmoothPatch, src, dst, blocked=frozenset()) -> list[int]:
    """Faces strictly between two face sets on a shortest face-adjacency path."""
    src, dst = set(src), set(dst)
    prev = {f: None for f in src}
    q = deque(sorted(src))
    while q:
        f = q.popleft()
        if f in dst:
            path = []
            g = prev[f]
            while g is not None and g not in src:
                path.append(g)
                g = prev[g]
            return path[::-1]
        for g in sorted(_neighbours(patch, PRIMAL, f)):
            if g not in prev and (g not in blocked or g in dst):
                prev[g] = f
                q.append(g)
    raise DefectError("no face path between the defects")


def _crossed_edges(patch: SmoothPatch, src, dst, faces: list[int]) -> list[int]:
    """Edges crossed by a dual path src -> faces -> dst."""
    chain = [None] + list(faces) + [None]
    out = []
    for i in range(len(chain) - 1):
        a, b = chain[i], chain[i + 1]
        a_set = set(src) if a is None else {a}
        b_set = set(dst) if b is None else {b}
        found = None
        for f in a_set:
            for e in patch.surface.face_edges[f]:
                if any(g in b_set for g in patch.edge_faces(e) if g != f):
                    found = e
                    break
            if found is not None:
                break
        if found is None:
            raise DefectError("face path is not contiguous")
        out.append(found)
    return out


def _vertex_path(patch: SmoothPatch, src, dst) -> list[int]:
    """Edges of a shortest primal path between two vertex sets."""
    src, dst = set(src), set(dst)
    prev: dict[int, tuple[int, int] | None] = {v: None for v in src}
    q = deque(sorted(src))
    while q:
        v = q.popleft()
        if v in dst:
            edges = []
            while prev[v] is not None:
                u, e = prev[v]
                edges.append(e)
                v = u
            return edges[::-1]
        for e in patch.surface.vertex_edges[v]:
            for u in patch.edge_vertices(e):
                if u != v and u not in prev:
                    prev[u] = (v, e)
                    q.append(u)
    raise DefectError("no vertex path between the defects")
