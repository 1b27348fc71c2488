"""Minimum-weight perfect matching decoders (2D and space-time) and exact ML decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import gf2
from .blossom import _matching, min_weight_perfect_matching_edges
from .chain_complex import Chain, HomologyClass
from .noise import NoiseModel, SpaceTimeError, coupling_from_p
from .surface_code import SurfaceCodeLayout, Syndrome, residual_class

WEIGHT_SCALE = 1000  # integer weight = round(J * WEIGHT_SCALE) per lattice step
_FAR = 1 << 30


# ---------------------------------------------------------------------------
# matching graphs


@dataclass
class MatchingGraph:
    """Explicit weighted graph handed to the matcher.

    ``coords[i]`` is (x, y) or (x, y, t); virtual boundary partners carry
    ``virtual[i] = True``.
    """

    n_nodes: int
    ei: np.ndarray
    ej: np.ndarray
    weights: np.ndarray
    coords: list[tuple[int, ...]] = field(default_factory=list)
    virtual: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.ei = np.asarray(self.ei, np.int64)
        self.ej = np.asarray(self.ej, np.int64)
        self.weights = np.asarray(self.weights, np.int64)
        if self.virtual is None:
            self.virtual = np.zeros(self.n_nodes, bool)

    @classmethod
    def complete(cls, weights: np.ndarray, coords=None) -> MatchingGraph:
        w = np.asarray(weights, np.int64)
        n = w.shape[0]
        if w.shape != (n, n) or not np.array_equal(w, w.T):
            raise ValueError("weights must be a symmetric square matrix")
        iu, ju = np.triu_indices(n, 1)
        return cls(n, iu, ju, w[iu, ju], list(coords or [(i, 0) for i in range(n)]))

    def weight_of(self, pairs) -> int:
        lookup = {}
        for a, b, w in zip(self.ei.tolist(), self.ej.tolist(), self.weights.tolist()):
            lookup[(min(a, b), max(a, b))] = w
        return int(sum(lookup[(min(a, b), max(a, b))] for a, b in pairs))

    def dump(self) -> str:
        """Line format: ``node i x y [t]`` then ``edge i j w``."""
        lines = []
        for i, c in enumerate(self.coords):
            tag = " virtual" if self.virtual[i] else ""
            lines.append(f"node {i} " + " ".join(str(int(v)) for v in c) + tag)
        for a, b, w in zip(self.ei.tolist(), self.ej.tolist(), self.weights.tolist()):
            lines.append(f"edge {a} {b} {w}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> MatchingGraph:
        coords, virtual, ei, ej, w = [], [], [], [], []
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "node":
                is_virtual = parts[-1] == "virtual"
                vals = parts[2:-1] if is_virtual else parts[2:]
                coords.append(tuple(int(v) for v in vals))
                virtual.append(is_virtual)
            elif parts[0] == "edge":
                ei.append(int(parts[1]))
                ej.append(int(parts[2]))
                w.append(int(parts[3]))
            else:
                raise ValueError(f"bad matching-graph line: {line!r}")
        return cls(len(coords), ei, ej, w, coords, np.array(virtual, bool))


def mwpm(g: MatchingGraph) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching as sorted node pairs."""
    if g.n_nodes % 2:
        raise ValueError(f"odd node count {g.n_nodes}: no perfect matching")
    mate = min_weight_perfect_matching_edges(g.n_nodes, g.ei, g.ej, g.weights)
    return [(i, int(mate[i])) for i in range(g.n_nodes) if i < mate[i]]


# ---------------------------------------------------------------------------
# decoding graph of one check matrix


class CheckGraph:
    """Checks as nodes, qubits as edges; a qubit seen by one check joins a boundary node."""

    def __init__(self, checks: np.ndarray) -> None:
        h = gf2.as_bits(checks)
        nc, nq = h.shape
        self.n_checks, self.n_qubits = nc, nq
        cols = h.sum(axis=0)
        if (cols > 2).any():
            raise ValueError("check matrix is not graph-like (a qubit meets more than two checks)")
        self.boundary = nc if (cols == 1).any() else -1
        n = nc + (1 if self.boundary >= 0 else 0)
        self.n_nodes = n
        qubit_of = np.full((n, n), -1, np.int64)
        rows, vals = [], []
        for q in range(nq):
            ends = np.flatnonzero(h[:, q]).tolist()
            if not ends:
                continue
            a, b = (ends[0], ends[1]) if len(ends) == 2 else (ends[0], self.boundary)
            if qubit_of[a, b] < 0:
                qubit_of[a, b] = qubit_of[b, a] = q
                rows += [a, b]
                vals += [b, a]
        adj = csr_matrix((np.ones(len(rows)), (rows, vals)), shape=(n, n))
        dist, pred = shortest_path(adj, method="D", unweighted=True, return_predecessors=True)
        dist = np.where(np.isinf(dist), _FAR, dist)
        self.dist = dist.astype(np.int64)
        self.pred = pred.astype(np.int64)
        self.qubit_of = qubit_of

    def path(self, a: int, b: int) -> np.ndarray:
        out = np.zeros(self.n_qubits, np.uint8)
        _trace(a, b, self.pred, self.qubit_of, out)
        return out


@lru_cache(maxsize=64)
def _check_graph(kind: str, n: int, basis: str) -> CheckGraph:
    from .surface_code import build_code

    return CheckGraph(build_code(kind, n).checks_for(basis))


def check_graph(code: SurfaceCodeLayout, basis: str) -> CheckGraph:
    return _check_graph(code.kind, code.n, basis)


# ---------------------------------------------------------------------------
# compiled match-and-trace


@njit(cache=True)
def _trace(a, b, pred, qubit_of, out):
    x = b
    while x != a:
        y = pred[a, x]
        out[qubit_of[y, x]] ^= 1
        x = y


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _build_edges(sites, times, dist, bnode, ws, wt):
    d = sites.shape[0]
    virt = bnode >= 0
    nn = 2 * d if virt else d
    m = d * (d - 1) // 2
    if virt:
        m += d + d * (d - 1) // 2
    ei = np.empty(m, np.int64)
    ej = np.empty(m, np.int64)
    ew = np.empty(m, np.int64)
    k = 0
    for i in range(d):
        for j in range(i + 1, d):
            ei[k] = i
            ej[k] = j
            ew[k] = ws * dist[sites[i], sites[j]] + wt * abs(times[i] - times[j])
            k += 1
    if virt:
        for i in range(d):
            ei[k] = i
            ej[k] = d + i
            ew[k] = ws * dist[sites[i], bnode]
            k += 1
        for i in range(d):
            for j in range(i + 1, d):
                ei[k] = d + i
                ej[k] = d + j
                ew[k] = 0
                k += 1
    return nn, ei, ej, ew


@njit(cache=True)
def _match(nn, ei, ej, ew):
    g = 0
    big = 0
    for k in range(ew.shape[0]):
        g = _gcd(g, ew[k])
    w = ew.copy()
    if g > 1:
        for k in range(w.shape[0]):
            w[k] //= g
    for k in range(w.shape[0]):
        if w[k] > big:
            big = w[k]
    for k in range(w.shape[0]):
        w[k] = big + 1 - w[k]
    return _matching(nn, ei, ej, w, True)


@njit(cache=True)
def _decode_one(sites, times, dist, pred, qubit_of, bnode, ws, wt, out):
    """Match defects (site, time) and write the spatial recovery into ``out``; return the mate array."""
    d = sites.shape[0]
    if d == 0:
        return np.zeros(0, np.int64)
    nn, ei, ej, ew = _build_edges(sites, times, dist, bnode, ws, wt)
    mate = _match(nn, ei, ej, ew)
    for i in range(d):
        j = mate[i]
        if j < 0:
            raise RuntimeError("matching is not perfect")
        if j < d:
            if i < j:
                _trace(sites[i], sites[j], pred, qubit_of, out)
        else:
            _trace(sites[i], bnode, pred, qubit_of, out)
    return mate


@njit(cache=True)
def _decode_batch(synd, dist, pred, qubit_of, bnode, ws, nq):
    """2D decoding of many syndromes (rows of ``synd``); returns recoveries."""
    shots = synd.shape[0]
    out = np.zeros((shots, nq), np.uint8)
    for s in range(shots):
        sites = np.flatnonzero(synd[s])
        times = np.zeros(sites.shape[0], np.int64)
        _decode_one(sites, times, dist, pred, qubit_of, bnode, ws, 0, out[s])
    return out


# ---------------------------------------------------------------------------
# results


@dataclass
class DecodeResult:
    basis: str
    matching: list[tuple[int, int]]
    recovery: np.ndarray
    residual: HomologyClass | None = None
    success: bool | None = None
    graph: MatchingGraph | None = None
    measurement_corrections: list[tuple[int, int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "matching": [list(p) for p in self.matching],
            "recovery": [int(q) for q in np.flatnonzero(self.recovery)],
            "residual": None if self.residual is None else self.residual.name,
            "success": self.success,
        }


def _weight_unit(p: float | None) -> int:
    if p is None or p <= 0:
        return WEIGHT_SCALE * 100
    if p >= 0.5:
        return 1
    return max(1, round(coupling_from_p(p) * WEIGHT_SCALE))


def _syndrome_bits(code: SurfaceCodeLayout, syndrome, basis: str) -> np.ndarray:
    checks = code.checks_for(basis)
    if isinstance(syndrome, Syndrome):
        sites = code.x_check_sites if basis == "Z" else code.z_check_sites
        flagged = syndrome.vertices if (basis == "Z" or code.z_check_on_vertices) else syndrome.faces
        pos = {int(s): i for i, s in enumerate(sites)}
        bits = np.zeros(checks.shape[0], np.uint8)
        for s in flagged:
            if int(s) not in pos:
                raise ValueError(f"site {s} carries no {basis}-error check")
            bits[pos[int(s)]] ^= 1
        return bits
    bits = gf2.as_bits(syndrome).ravel()
    if bits.shape != (checks.shape[0],):
        raise ValueError(f"syndrome has {bits.size} bits, expected {checks.shape[0]}")
    return bits


def _check_parity(g: CheckGraph, bits: np.ndarray) -> None:
    if g.boundary < 0 and int(bits.sum()) % 2:
        raise ValueError("odd number of defects on a closed surface is not a valid syndrome")


def _site_coords(code: SurfaceCodeLayout, basis: str, k: int) -> tuple[int, int]:
    n = code.n
    if code.kind == "toric":
        return (k % n, k // n)
    if code.kind == "planar":
        width = n - 1 if basis == "Z" else n
        return (k % width, k // width)
    return (int((code.z_check_sites if basis == "X" else code.x_check_sites)[k]), 0)


def _graph_for(code, basis: str, sites, times, ws, wt, with_time: bool) -> MatchingGraph:
    g = check_graph(code, basis)
    nn, ei, ej, ew = _build_edges(np.asarray(sites, np.int64), np.asarray(times, np.int64), g.dist, g.boundary, ws, wt)
    coords = []
    for s, t in zip(sites, times):
        xy = _site_coords(code, basis, int(s))
        coords.append(xy + (int(t),) if with_time else xy)
    virtual = np.zeros(nn, bool)
    if nn > len(sites):
        coords += [(-1, -1, int(t)) if with_time else (-1, -1) for t in times]
        virtual[len(sites) :] = True
    return MatchingGraph(nn, ei, ej, ew, coords, virtual)


def decode_2d(
    code: SurfaceCodeLayout,
    syndrome,
    model: NoiseModel | float | None = None,
    *,
    basis: str | None = None,
    error=None,
    keep_graph: bool = False,
) -> DecodeResult:
    """MWPM decoding of one error type under perfect syndrome measurement.

    ``syndrome`` is a :class:`Syndrome` or a bit vector over the checks of
    ``basis`` (default: Z errors, or X errors for a vertex-parity code).
    Passing the true ``error`` fills in the residual class and success flag.
    """
    if basis is None:
        basis = "X" if code.z_check_on_vertices else "Z"
    bits = _syndrome_bits(code, syndrome, basis)
    g = check_graph(code, basis)
    _check_parity(g, bits)
    p = _rate_for(model, basis)
    ws = _weight_unit(p)
    sites = np.flatnonzero(bits).astype(np.int64)
    times = np.zeros(sites.size, np.int64)
    recovery = np.zeros(code.n_qubits, np.uint8)
    mate = _decode_one(sites, times, g.dist, g.pred, g.qubit_of, g.boundary, ws, 0, recovery)
    pairs = [(i, int(mate[i])) for i in range(len(mate)) if i < mate[i]]
    graph = _graph_for(code, basis, sites, times, ws, 0, False) if keep_graph else None
    res = DecodeResult(basis, pairs, recovery, graph=graph)
    if error is not None:
        e = error.bits if isinstance(error, Chain) else gf2.as_bits(error)
        res.residual = residual_class(code, e ^ recovery, basis)
        res.success = res.residual.is_trivial
    return res


def _rate_for(model, basis: str) -> float | None:
    if model is None:
        return None
    if isinstance(model, (int, float)):
        return float(model)
    if model.kind == "iid_xz":
        return model.p_z if basis == "Z" else model.p_x
    if model.kind == "depolarizing":
        return 2 * model.p / 3
    if model.kind == "phenomenological":
        return model.p_data
    return model.p2


def decode_batch(code: SurfaceCodeLayout, syndromes: np.ndarray, model=None, basis: str = "Z") -> np.ndarray:
    """Recoveries for many 2D syndromes at once (rows are shots)."""
    g = check_graph(code, basis)
    synd = np.ascontiguousarray(syndromes, dtype=np.uint8)
    if g.boundary < 0 and (synd.sum(axis=1) % 2).any():
        raise ValueError("odd number of defects on a closed surface is not a valid syndrome")
    return _decode_batch(synd, g.dist, g.pred, g.qubit_of, g.boundary, _weight_unit(_rate_for(model, basis)), code.n_qubits)


def decode_3d(
    code: SurfaceCodeLayout,
    defects: np.ndarray | SpaceTimeError,
    model: NoiseModel | None = None,
    *,
    final_error=None,
    keep_graph: bool = False,
) -> DecodeResult:
    """MWPM on the space-time lattice for Z errors seen by the X checks.

    ``defects[t, k]`` is the differenced syndrome s_k(t+1) over all layers,
    the last layer coming from the perfect final round.  Edge weights are
    J_data * (spatial distance) + J_meas * |dt|.  Matched pairs contribute
    their spatial path to the data recovery; their time separation is the
    part attributed to measurement errors.
    """
    if isinstance(defects, SpaceTimeError):
        if final_error is None:
            final_error = defects.final_error
        defects = defects.defects
    s = gf2.as_bits(defects)
    if s.ndim != 2 or s.shape[0] < 1:
        raise ValueError("defects must be a (layers, checks) array with at least one layer")
    g = check_graph(code, "Z")
    if s.shape[1] != g.n_checks:
        raise ValueError(f"defects have {s.shape[1]} checks, code has {g.n_checks}")
    _check_parity(g, s.ravel())
    if model is None:
        ws = wt = _weight_unit(None)
    elif model.kind == "phenomenological":
        ws, wt = _weight_unit(model.p_data), _weight_unit(model.p_meas)
    else:
        raise ValueError("space-time decoding needs a phenomenological model")
    ts, ks = np.nonzero(s)
    sites = ks.astype(np.int64)
    times = ts.astype(np.int64)
    recovery = np.zeros(code.n_qubits, np.uint8)
    mate = _decode_one(sites, times, g.dist, g.pred, g.qubit_of, g.boundary, ws, wt, recovery)
    d = len(sites)
    pairs = [(i, int(mate[i])) for i in range(len(mate)) if i < mate[i]]
    meas = []
    for i, j in pairs:
        if j < d and times[i] != times[j] and sites[i] == sites[j]:
            meas.append((int(sites[i]), int(min(times[i], times[j])), int(max(times[i], times[j]))))
    graph = _graph_for(code, "Z", sites, times, ws, wt, True) if keep_graph else None
    res = DecodeResult("Z", pairs, recovery, graph=graph, measurement_corrections=meas)
    if final_error is not None:
        res.residual = residual_class(code, gf2.as_bits(final_error) ^ recovery, "Z")
        res.success = res.residual.is_trivial
    return res


@njit(cache=True)
def _decode_3d_fast(s, dist, pred, qubit_of, bnode, ws, wt, nq):
    ts, ks = np.nonzero(s)
    out = np.zeros(nq, np.uint8)
    _decode_one(ks.astype(np.int64), ts.astype(np.int64), dist, pred, qubit_of, bnode, ws, wt, out)
    return out


def decode_3d_recovery(code: SurfaceCodeLayout, defects: np.ndarray, model: NoiseModel) -> np.ndarray:
    """Recovery only; the hot path of threshold sweeps."""
    g = check_graph(code, "Z")
    return _decode_3d_fast(
        np.ascontiguousarray(defects, dtype=np.uint8),
        g.dist,
        g.pred,
        g.qubit_of,
        g.boundary,
        _weight_unit(model.p_data),
        _weight_unit(model.p_meas),
        code.n_qubits,
    )


# ---------------------------------------------------------------------------
# maximum likelihood


ML_MAX_GENERATORS = 20


@dataclass
class MLResult:
    basis: str
    class_index: int
    posteriors: np.ndarray
    reference: np.ndarray
    recovery: np.ndarray

    @property
    def logical_class(self) -> HomologyClass:
        k = int(round(math.log2(len(self.posteriors))))
        return HomologyClass(tuple((self.class_index >> i) & 1 for i in range(k)))


def _ml_tables(code: SurfaceCodeLayout, basis: str):
    same = code.z_checks if basis == "Z" else code.x_checks
    logicals = code.logical_z if basis == "Z" else code.logical_x
    arrays = (code.checks_for(basis), same, logicals, code.conjugate_logicals(basis))
    key = tuple((a.shape, gf2.as_bits(a).tobytes()) for a in arrays)
    return _ml_tables_cached(key)


@lru_cache(maxsize=16)
def _ml_tables_cached(key):
    checks, same, logicals, conj = (np.frombuffer(b, np.uint8).reshape(shape) for shape, b in key)
    n = checks.shape[1]
    gens = gf2.row_basis(same) if same.size else np.zeros((0, n), np.uint8)
    if gens.shape[0] > ML_MAX_GENERATORS:
        raise ValueError(f"{gens.shape[0]} stabilizer generators exceed the ML limit of {ML_MAX_GENERATORS}")
    group = gf2.span_elements(gens) if gens.shape[0] else np.zeros((1, n), np.uint8)
    conj = conj.astype(np.int64)
    k = logicals.shape[0]
    reps = np.zeros((1 << k, n), np.uint8)
    for j in range(1 << k):
        combo = np.zeros(n, np.uint8)
        for i in range(k):
            if (j >> i) & 1:
                combo ^= logicals[i]
        cls = (conj @ combo.astype(np.int64)) & 1
        reps[sum(int(b) << i for i, b in enumerate(cls))] = combo
    return gf2.Solver(checks), group, reps, conj


def ml_decode(code: SurfaceCodeLayout, syndrome, p: float, *, basis: str = "Z") -> MLResult:
    """Exact posterior over logical classes for independent flips at rate ``p``.

    Class i holds the errors R(S) + G + L_i, where R(S) is a fixed reference
    solution of the syndrome, G runs over the same-type stabilizer group and
    L_i is the logical whose pairing with the conjugate logicals has bits i.
    Ties go to the lowest index.
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p = {p} is outside [0, 1/2]")
    solver, group, reps, _ = _ml_tables(code, basis)
    bits = _syndrome_bits(code, syndrome, basis)
    ref = solver.solve(bits)
    if ref is None:
        raise ValueError("syndrome is not consistent with any error")
    n = code.n_qubits
    post = np.zeros(len(reps))
    for i, lrep in enumerate(reps):
        w = np.count_nonzero(group ^ (ref ^ lrep), axis=1)
        counts = np.bincount(w, minlength=n + 1).astype(float)
        ws = np.arange(n + 1)
        if p == 0.0:
            post[i] = counts[0]
        else:
            post[i] = float(np.sum(counts * np.exp(ws * math.log(p) + (n - ws) * math.log1p(-p))))
    total = post.sum()
    post = post / total
    best = int(np.argmax(post))
    return MLResult(basis, best, post, ref, ref ^ reps[best])


def decode_ml(code: SurfaceCodeLayout, syndrome, p: float, *, basis: str = "Z", error=None) -> DecodeResult:
    r = ml_decode(code, syndrome, p, basis=basis)
    res = DecodeResult(basis, [], r.recovery)
    if error is not None:
        e = error.bits if isinstance(error, Chain) else gf2.as_bits(error)
        res.residual = residual_class(code, e ^ r.recovery, basis)
        res.success = res.residual.is_trivial
    return res
