"""Stabilizer tableau engine.

A tableau holds k <= n commuting, independent Hermitian Pauli generators as
rows of bit matrices plus a phase exponent per row (always 0 or 2).  Gates
act by conjugation; Pauli measurements follow the usual two cases (some
generator anticommutes -> fair coin, otherwise the outcome is fixed, or
random when the tableau describes a mixed state and +-P is not in the group).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .pauli import PauliProduct, product_phase

GATES_1Q = ("I", "H", "S", "SDG", "X", "Y", "Z")
GATES_2Q = ("CNOT", "CZ")
_GATE_ALIASES = {"S†": "SDG", "SDAG": "SDG", "S_DAG": "SDG", "CX": "CNOT"}


class TableauError(ValueError):
    """Invalid tableau construction or update."""


@dataclass(frozen=True)
class Probability:
    """Exact probability 0 or 2**-k."""

    is_zero: bool = False
    k: int = 0

    @property
    def value(self) -> float:
        return 0.0 if self.is_zero else 2.0 ** (-self.k)

    def halved(self) -> Probability:
        return self if self.is_zero else Probability(False, self.k + 1)

    def __float__(self) -> float:
        return self.value


ZERO = Probability(True, 0)
ONE = Probability(False, 0)


def _canon_gate(name: str) -> str:
    g = name.upper()
    return _GATE_ALIASES.get(g, g)


class StabilizerTableau:
    """Generating set of a stabilizer group on ``n`` qubits."""

    def __init__(self, n: int, xs=None, zs=None, phases=None, *, check: bool = True) -> None:
        self.n = int(n)
        if xs is None:
            xs = np.zeros((0, n), np.uint8)
            zs = np.zeros((0, n), np.uint8)
            phases = np.zeros(0, np.int64)
        self.xs = np.array(xs, dtype=np.uint8).reshape(-1, n)
        self.zs = np.array(zs, dtype=np.uint8).reshape(-1, n)
        self.phases = np.array(phases, dtype=np.int64).reshape(-1) % 4
        if check:
            self.validate()

    # construction -------------------------------------------------------

    @classmethod
    def zero_state(cls, n: int) -> StabilizerTableau:
        return cls(n, np.zeros((n, n), np.uint8), np.eye(n, dtype=np.uint8), np.zeros(n, np.int64), check=False)

    @classmethod
    def from_generators(cls, gens: Sequence[PauliProduct | str], *, reduce: bool = False) -> StabilizerTableau:
        """Build from Pauli products (or strings).

        With ``reduce=True`` dependent generators are dropped after checking
        they are consistent with the others; otherwise dependence is an error.
        """
        paulis = [PauliProduct.parse(g) if isinstance(g, str) else g for g in gens]
        if not paulis:
            raise TableauError("need at least one generator (or use StabilizerTableau(n))")
        n = paulis[0].n
        t = cls(n, check=False)
        for p in paulis:
            if p.n != n:
                raise TableauError("generators have different qubit counts")
            if not p.is_hermitian:
                raise TableauError(f"generator {p} is not Hermitian")
            if not t._commutes_with_all(p):
                raise TableauError(f"generator {p} does not commute with the others")
            sign = t.membership(p)
            if sign is not None:
                if not reduce:
                    raise TableauError(f"generator {p} is dependent on the others")
                if sign != p.sign:
                    raise TableauError("-I is in the generated group")
                continue
            t._append(p)
        return t

    def copy(self) -> StabilizerTableau:
        return StabilizerTableau(self.n, self.xs.copy(), self.zs.copy(), self.phases.copy(), check=False)

    # views -----------------------------------------------------------------

    @property
    def k(self) -> int:
        return int(self.xs.shape[0])

    def row(self, i: int) -> PauliProduct:
        return PauliProduct(self.xs[i], self.zs[i], int(self.phases[i]))

    @property
    def generators(self) -> list[PauliProduct]:
        return [self.row(i) for i in range(self.k)]

    def __len__(self) -> int:
        return self.k

    def __repr__(self) -> str:
        return f"StabilizerTableau(n={self.n}, [{', '.join(str(g) for g in self.generators)}])"

    def validate(self) -> None:
        """Check commuting, independent and Hermitian generators."""
        if np.any(self.phases % 2):
            raise TableauError("non-Hermitian generator")
        x = self.xs.astype(np.int64)
        z = self.zs.astype(np.int64)
        comm = (x @ z.T + z @ x.T) & 1
        if comm.any():
            raise TableauError("generators do not commute")
        if gf2.rank(np.concatenate([self.xs, self.zs], axis=1)) != self.k:
            raise TableauError("generators are not independent")

    # internal helpers ---------------------------------------------------

    def _anticommuting(self, p: PauliProduct) -> np.ndarray:
        x = self.xs.astype(np.int64)
        z = self.zs.astype(np.int64)
        s = (x @ p.z_bits.astype(np.int64) + z @ p.x_bits.astype(np.int64)) & 1
        return np.flatnonzero(s)

    def _commutes_with_all(self, p: PauliProduct) -> bool:
        return self._anticommuting(p).size == 0

    def _append(self, p: PauliProduct) -> None:
        self.xs = np.vstack([self.xs, p.x_bits[None, :]])
        self.zs = np.vstack([self.zs, p.z_bits[None, :]])
        self.phases = np.append(self.phases, p.phase % 4)

    def _rows_times(self, rows: np.ndarray, x2, z2, ph2: int) -> None:
        """Replace each selected row R by R * P."""
        if rows.size == 0:
            return
        extra = product_phase(self.xs[rows], self.zs[rows], x2[None, :], z2[None, :]).sum(axis=1)
        self.phases[rows] = (self.phases[rows] + ph2 + extra) % 4
        self.xs[rows] ^= x2
        self.zs[rows] ^= z2

    def membership(self, p: PauliProduct) -> int | None:
        """+1 if p is in the group, -1 if -p is, None if neither."""
        if self.k == 0:
            return 1 if p.weight == 0 and p.phase == 0 else (-1 if p.weight == 0 and p.phase == 2 else None)
        a = np.concatenate([self.xs, self.zs], axis=1).T
        sel = gf2.Solver(a).solve(p.symplectic())
        if sel is None:
            return None
        acc = PauliProduct.identity(self.n)
        for i in np.flatnonzero(sel):
            acc = acc * self.row(int(i))
        # acc has the bits of p; compare phases
        diff = (acc.phase - p.phase) % 4
        if diff == 0:
            return 1
        if diff == 2:
            return -1
        raise TableauError("non-Hermitian comparison")

    def contains(self, p: PauliProduct, *, up_to_sign: bool = False) -> bool:
        m = self.membership(p)
        if m is None:
            return False
        return up_to_sign or m == 1

    # gates ------------------------------------------------------------------

    def apply(self, gate: str, *qubits: int) -> StabilizerTableau:
        """Conjugate every generator by the named Clifford gate (in place)."""
        g = _canon_gate(gate)
        qs = [int(q) for q in qubits]
        for q in qs:
            if not 0 <= q < self.n:
                raise TableauError(f"qubit index {q} out of range for n={self.n}")
        if len(set(qs)) != len(qs):
            raise TableauError(f"duplicate qubit in {gate} {qs}")
        if g in GATES_1Q:
            if len(qs) != 1:
                raise TableauError(f"{gate} takes one qubit")
            self._apply_1q(g, qs[0])
        elif g in GATES_2Q:
            if len(qs) != 2:
                raise TableauError(f"{gate} takes two qubits")
            if g == "CNOT":
                self._cnot(*qs)
            else:
                a, b = qs
                self._apply_1q("H", b)
                self._cnot(a, b)
                self._apply_1q("H", b)
        else:
            raise TableauError(f"unknown gate {gate!r}")
        return self

    def _apply_1q(self, g: str, q: int) -> None:
        x = self.xs[:, q].copy()
        z = self.zs[:, q].copy()
        if g == "I":
            return
        if g == "H":
            self.phases = (self.phases + 2 * (x & z)) % 4
            self.xs[:, q], self.zs[:, q] = z, x
        elif g == "S":
            self.phases = (self.phases + 2 * (x & z)) % 4
            self.zs[:, q] = z ^ x
        elif g == "SDG":
            self.phases = (self.phases + 2 * (x & (1 - z))) % 4
            self.zs[:, q] = z ^ x
        elif g == "X":
            self.phases = (self.phases + 2 * z) % 4
        elif g == "Z":
            self.phases = (self.phases + 2 * x) % 4
        elif g == "Y":
            self.phases = (self.phases + 2 * (x ^ z)) % 4

    def _cnot(self, c: int, t: int) -> None:
        xc, zc = self.xs[:, c].astype(np.int64), self.zs[:, c].astype(np.int64)
        xt, zt = self.xs[:, t].astype(np.int64), self.zs[:, t].astype(np.int64)
        flip = xc & zt & (xt ^ zc ^ 1)
        self.phases = (self.phases + 2 * flip) % 4
        self.xs[:, t] ^= self.xs[:, c]
        self.zs[:, c] ^= self.zs[:, t]

    # measurement --------------------------------------------------------------

    def measure(self, p: PauliProduct, rng=None, forced: int | None = None) -> tuple[int, Probability, int | None]:
        """Measure a Hermitian Pauli product in place.

        Returns (outcome bit, probability of that outcome, pivot) where pivot
        is the index of the replaced generator for a random outcome (the
        replaced generator maps one branch onto the other) and None otherwise.
        ``forced`` selects the outcome of a random measurement (postselection).
        """
        if p.n != self.n:
            raise TableauError(f"size mismatch: {p.n} vs {self.n} qubits")
        if not p.is_hermitian:
            raise TableauError(f"cannot measure non-Hermitian {p}")
        anti = self._anticommuting(p)
        if anti.size:
            pivot = int(anti[0])
            others = anti[1:]
            self._rows_times(others, self.xs[pivot].copy(), self.zs[pivot].copy(), int(self.phases[pivot]))
            m = self._coin(rng, forced)
            self.xs[pivot] = p.x_bits
            self.zs[pivot] = p.z_bits
            self.phases[pivot] = (p.phase + 2 * m) % 4
            return m, Probability(False, 1), pivot
        sign = self.membership(p)
        if sign is not None:
            return (0 if sign == 1 else 1), ONE, None
        m = self._coin(rng, forced)
        self._append(PauliProduct(p.x_bits, p.z_bits, p.phase + 2 * m))
        return m, Probability(False, 1), None

    @staticmethod
    def _coin(rng, forced: int | None) -> int:
        if forced is not None:
            if forced not in (0, 1):
                raise TableauError("forced outcome must be 0 or 1")
            return int(forced)
        if rng is None:
            raise TableauError("random outcome needs an rng or a forced value")
        return int(rng.integers(2))

    # canonical form --------------------------------------------------------

    def canonical(self) -> StabilizerTableau:
        """Reduced echelon form over (x|z) columns, lowest pivot first, phases tracked."""
        t = self.copy()
        k, n = t.k, t.n
        r = 0
        for col in range(2 * n):
            if r >= k:
                break
            column = t.xs[:, col] if col < n else t.zs[:, col - n]
            nz = np.flatnonzero(column[r:])
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                for arr in (t.xs, t.zs, t.phases):
                    arr[[r, p]] = arr[[p, r]]
            column = t.xs[:, col] if col < n else t.zs[:, col - n]
            others = np.flatnonzero(column)
            others = others[others != r]
            t._rows_times(others, t.xs[r].copy(), t.zs[r].copy(), int(t.phases[r]))
            r += 1
        return t

    def same_group(self, other: StabilizerTableau) -> bool:
        if self.n != other.n or self.k != other.k:
            return False
        a, b = self.canonical(), other.canonical()
        return (
            np.array_equal(a.xs, b.xs) and np.array_equal(a.zs, b.zs) and np.array_equal(a.phases, b.phases)
        )


def apply_clifford(t: StabilizerTableau, gate: str, qubits: Iterable[int]) -> StabilizerTableau:
    return t.apply(gate, *qubits)


def measure_pauli(t: StabilizerTableau, p: PauliProduct, rng=None, forced: int | None = None):
    """(outcome, probability, tableau); the tableau is updated in place."""
    m, prob, _ = t.measure(p, rng, forced)
    return m, prob, t


# circuits -----------------------------------------------------------------


@dataclass
class CliffordCircuit:
    """Ordered Clifford gates followed by terminal Z measurements."""

    n: int
    gates: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    measure: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for g, qs in self.gates:
            self._check_gate(g, qs)
        for q in self.measure:
            if not 0 <= q < self.n:
                raise TableauError(f"measured qubit {q} out of range")

    def _check_gate(self, g: str, qs: tuple[int, ...]) -> None:
        name = _canon_gate(g)
        arity = 1 if name in GATES_1Q else 2 if name in GATES_2Q else None
        if arity is None:
            raise TableauError(f"unknown gate {g!r}")
        if len(qs) != arity or len(set(qs)) != arity:
            raise TableauError(f"bad qubit list for {g}: {qs}")
        if any(not 0 <= q < self.n for q in qs):
            raise TableauError(f"qubit index out of range in {g} {qs}")

    def append(self, gate: str, *qubits: int) -> CliffordCircuit:
        self._check_gate(gate, tuple(qubits))
        self.gates.append((_canon_gate(gate), tuple(int(q) for q in qubits)))
        return self

    def run(self, t: StabilizerTableau | None = None) -> StabilizerTableau:
        t = StabilizerTableau.zero_state(self.n) if t is None else t
        for g, qs in self.gates:
            t.apply(g, *qs)
        return t

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> CliffordCircuit:
        """Parse one gate per line (``H 3``, ``CNOT 0 1``); ``M q...`` ends the circuit.

        Blank lines and ``#`` comments are ignored.  When ``n`` is omitted it
        is one more than the largest index used.
        """
        gates: list[tuple[str, tuple[int, ...]]] = []
        measure: tuple[int, ...] = ()
        seen_m = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if seen_m:
                raise TableauError(f"line {lineno}: gate after terminal M line")
            parts = line.split()
            try:
                qs = tuple(int(a) for a in parts[1:])
            except ValueError as exc:
                raise TableauError(f"line {lineno}: bad qubit index in {line!r}") from exc
            if parts[0].upper() == "M":
                measure = qs
                seen_m = True
            else:
                gates.append((_canon_gate(parts[0]), qs))
        used = [q for _, qs in gates for q in qs] + list(measure)
        if n is None:
            n = max(used) + 1 if used else 0
        return cls(n, gates, measure)

    def to_text(self) -> str:
        lines = [f"{g} {' '.join(map(str, qs))}" for g, qs in self.gates]
        if self.measure:
            lines.append("M " + " ".join(map(str, self.measure)))
        return "\n".join(lines) + "\n"


def outcome_probability(c: CliffordCircuit, outcome: Sequence[int]) -> Probability:
    """Exact probability of a terminal Z-measurement outcome on the mask qubits."""
    if len(outcome) != len(c.measure):
        raise TableauError(f"outcome has {len(outcome)} bits, mask has {len(c.measure)}")
    t = c.run()
    prob = ONE
    for q, bit in zip(c.measure, outcome):
        m, p, _ = t.measure(PauliProduct.single(c.n, q, "Z"), forced=int(bit))
        if p == ONE:
            if m != int(bit):
                return ZERO
        else:
            prob = prob.halved()
    return prob


BASIS_STATES = ("0", "1", "+", "-", "+i", "-i")
_BASIS_STABILIZER = {"0": ("Z", 0), "1": ("Z", 2), "+": ("X", 0), "-": ("X", 2), "+i": ("Y", 0), "-i": ("Y", 2)}


def product_state(states: Sequence[str]) -> StabilizerTableau:
    """Tableau of a product of single-qubit Pauli eigenstates."""
    n = len(states)
    gens = []
    for q, s in enumerate(states):
        letter, ph = _BASIS_STABILIZER[s]
        gens.append(PauliProduct.from_support(n, {q: letter}, ph))
    return StabilizerTableau.from_generators(gens)


def _normalize_mixture(w) -> np.ndarray:
    if isinstance(w, dict):
        w = [w.get(s, 0.0) for s in BASIS_STATES]
    w = np.asarray(w, dtype=float)
    if w.shape != (6,):
        raise TableauError("a mixture needs six weights over the Pauli-basis states")
    if np.any(w < 0) or not np.isclose(w.sum(), 1.0, atol=1e-12):
        raise TableauError(f"mixture weights must be non-negative and sum to 1, got {w}")
    return w


def weak_sample(c: CliffordCircuit, inputs, rng) -> tuple[int, ...]:
    """Sample one outcome for convex mixtures of Pauli-basis input states.

    ``inputs`` is one mixture per qubit (six weights ordered as
    ``BASIS_STATES`` or a dict keyed by state label); None means |0>.
    """
    if inputs is None:
        inputs = [None] * c.n
    if len(inputs) != c.n:
        raise TableauError("need one input mixture per qubit")
    states = []
    for w in inputs:
        if w is None:
            states.append("0")
        else:
            states.append(BASIS_STATES[int(rng.choice(6, p=_normalize_mixture(w)))])
    t = c.run(product_state(states))
    return tuple(t.measure(PauliProduct.single(c.n, q, "Z"), rng)[0] for q in c.measure)


def random_clifford_circuit(n: int, depth: int, rng, measure: Sequence[int] | None = None) -> CliffordCircuit:
    """Uniformly chosen gates from the supported set; handy for tests and demos."""
    names = ("H", "S", "SDG", "X", "Y", "Z", "CNOT", "CZ")
    c = CliffordCircuit(n, [], tuple(range(n)) if measure is None else tuple(measure))
    for _ in range(depth):
        g = names[int(rng.integers(len(names)))]
        if g in GATES_2Q and n >= 2:
            a, b = rng.choice(n, size=2, replace=False)
            c.append(g, int(a), int(b))
        elif g not in GATES_2Q:
            c.append(g, int(rng.integers(n)))
    return c


# graph states ------------------------------------------------------------


def graph_state(n: int, edges: Iterable[tuple[int, int]]) -> StabilizerTableau:
    """K_i = X_i prod_{j ~ i} Z_j for a simple undirected graph on vertices 0..n-1."""
    adj = np.zeros((n, n), dtype=np.uint8)
    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise TableauError(f"self-loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise TableauError(f"edge ({a}, {b}) out of range")
        if adj[a, b]:
            raise TableauError(f"multi-edge between {a} and {b}")
        adj[a, b] = adj[b, a] = 1
    return StabilizerTableau(n, np.eye(n, dtype=np.uint8), adj, np.zeros(n, np.int64))


def seven_qubit_encoder() -> CliffordCircuit:
    """Encoder whose output is the uniform superposition over the [7,4] Hamming code.

    Qubits 0, 1, 3 seed the simplex code {1010101, 0110011, 0001111}; a final
    Hadamard layer turns it into its dual.  An X on the first input becomes
    ZIZIZIZ at the output.
    """
    c = CliffordCircuit(7)
    for q in (0, 1, 3):
        c.append("H", q)
    rows = {0: (2, 4, 6), 1: (2, 5, 6), 3: (4, 5, 6)}
    for ctrl, targets in rows.items():
        for tgt in targets:
            c.append("CNOT", ctrl, tgt)
    for q in range(7):
        c.append("H", q)
    return c
