"""CSS codes from parity checks and the 15-to-1 magic-state distillation analytics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import gf2
from .codes import HAMMING_H, RM15_HX, RM15_HZ
from .pauli import PauliProduct
from .stabilizer import StabilizerTableau

ENUMERATION_LIMIT = 24
OCTAHEDRON_BOUND = (1 - math.sqrt(2) / 2) / 2
COST_EXPONENT = math.log(15) / math.log(3)


class OrthogonalityError(ValueError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"row {i} of H_x and row {j} of H_z overlap in an odd number of positions")
        self.rows = (i, j)


def _complement(space: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Rows of ``space`` extending a basis of ``sub`` to a basis of ``space``."""
    basis = [r for r in gf2.row_basis(sub)] if sub.size else []
    out = []
    for r in space:
        if gf2.rank(np.array(basis + [r], np.uint8)) > len(basis):
            basis.append(r)
            out.append(r)
    return np.array(out, np.uint8).reshape(len(out), space.shape[1])


@dataclass(eq=False)
class CssCode:
    """X generators from the rows of H_x, Z generators from the rows of H_z."""

    hx: np.ndarray
    hz: np.ndarray

    @property
    def n(self) -> int:
        return int(self.hx.shape[1])

    @property
    def rank_x(self) -> int:
        return gf2.rank(self.hx)

    @property
    def rank_z(self) -> int:
        return gf2.rank(self.hz)

    @property
    def k(self) -> int:
        return self.n - self.rank_x - self.rank_z

    @cached_property
    def logicals(self) -> tuple[np.ndarray, np.ndarray]:
        """(X-type, Z-type) logical bit rows with pairwise anticommutation X_i Z_j = delta_ij.

        X logicals span Ker(H_z) mod Row(H_x); Z logicals span Ker(H_x) mod Row(H_z).
        """
        lx = _complement(gf2.nullspace(self.hz), self.hx)
        lz = _complement(gf2.nullspace(self.hx), self.hz)
        # symplectic Gram-Schmidt so the pairing matrix becomes the identity
        lx, lz = [r.copy() for r in lx], [r.copy() for r in lz]
        xs, zs = [], []
        while lx:
            a = lx.pop(0)
            j = next(i for i, b in enumerate(lz) if int(a.astype(int) @ b.astype(int)) & 1)
            b = lz.pop(j)
            lx = [r ^ a if int(r.astype(int) @ b.astype(int)) & 1 else r for r in lx]
            lz = [r ^ b if int(r.astype(int) @ a.astype(int)) & 1 else r for r in lz]
            xs.append(a)
            zs.append(b)
        shape = (0, self.n)
        return np.array(xs, np.uint8).reshape(-1, self.n) if xs else np.zeros(shape, np.uint8), (
            np.array(zs, np.uint8).reshape(-1, self.n) if zs else np.zeros(shape, np.uint8)
        )

    def stabilizers(self) -> list[PauliProduct]:
        return [PauliProduct.from_xz("X", r) for r in self.hx] + [PauliProduct.from_xz("Z", r) for r in self.hz]

    def tableau(self) -> StabilizerTableau:
        return StabilizerTableau.from_generators(self.stabilizers(), reduce=True)

    def logical_zero_terms(self) -> np.ndarray:
        """Computational-basis terms of |0_L>: the row space of H_x."""
        return gf2.span_elements(gf2.row_basis(self.hx))

    def logical_one_terms(self) -> np.ndarray:
        lx = self.logicals[0]
        if lx.shape[0] != 1:
            raise ValueError("logical_one_terms needs k = 1")
        return self.logical_zero_terms() ^ lx[0]


def build_css(hx, hz) -> CssCode:
    hx, hz = gf2.as_bits(np.atleast_2d(hx)), gf2.as_bits(np.atleast_2d(hz))
    if hx.shape[1] != hz.shape[1]:
        raise ValueError("H_x and H_z must have the same number of columns")
    overlap = (hx.astype(np.int64) @ hz.T.astype(np.int64)) & 1
    bad = np.argwhere(overlap)
    if bad.size:
        raise OrthogonalityError(int(bad[0, 0]), int(bad[0, 1]))
    return CssCode(hx, hz)


def css_fixture(name: str) -> CssCode:
    if name == "steane7":
        return build_css(HAMMING_H, HAMMING_H)
    if name == "reed_muller15":
        return build_css(RM15_HX, RM15_HZ)
    raise KeyError(f"unknown CSS fixture {name!r}")


# ---------------------------------------------------------------------------
# weight enumerators


@dataclass(frozen=True)
class WeightEnumerator:
    """W(x, y) = sum_w a_w x^(n-w) y^w with exact integer coefficients."""

    n: int
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.n + 1:
            raise ValueError("need n + 1 coefficients")

    @property
    def size(self) -> int:
        return sum(self.coefficients)

    def __call__(self, x: float, y: float) -> float:
        return self.evaluate(x, y)

    def evaluate(self, x, y):
        return sum(a * x ** (self.n - w) * y**w for w, a in enumerate(self.coefficients) if a)

    def __str__(self) -> str:
        terms = []
        for w, a in enumerate(self.coefficients):
            if not a:
                continue
            mono = "".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", self.n - w), ("y", w)) if e
            )
            terms.append(f"{a}{mono}" if a != 1 or not mono else mono)
        return " + ".join(terms) or "0"


def weight_enumerator(generators, n: int | None = None) -> WeightEnumerator:
    """Enumerate the span of ``generators`` (rows) by weight."""
    g = gf2.as_bits(np.atleast_2d(generators)) if np.size(generators) else None
    if g is None:
        if n is None:
            raise ValueError("n is required for the zero space")
        return WeightEnumerator(n, (1,) + (0,) * n)
    basis = gf2.row_basis(g)
    if basis.shape[0] > ENUMERATION_LIMIT:
        raise ValueError(f"dimension {basis.shape[0]} exceeds the enumeration bound {ENUMERATION_LIMIT}")
    n = g.shape[1]
    w = np.count_nonzero(gf2.span_elements(basis), axis=1)
    return WeightEnumerator(n, tuple(int(c) for c in np.bincount(w, minlength=n + 1)))


def macwilliams(we: WeightEnumerator, size: int | None = None) -> WeightEnumerator:
    """Enumerator of the dual space: W(x + y, x - y) / |V|, expanded exactly."""
    n = we.n
    size = we.size if size is None else size
    out = []
    for j in range(n + 1):
        # Krawtchouk coefficient of x^(n-j) y^j in (x+y)^(n-w) (x-y)^w
        total = 0
        for w, a in enumerate(we.coefficients):
            if a:
                total += a * sum((-1) ** i * comb(w, i) * comb(n - w, j - i) for i in range(0, min(w, j) + 1))
        if total % size:
            raise ValueError("MacWilliams transform is not integral: inconsistent enumerator")
        out.append(total // size)
    return WeightEnumerator(n, tuple(out))


# ---------------------------------------------------------------------------
# 15-to-1 distillation


def _check_rate(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p = {p} is outside [0, 1/2]")
    return p


def pass_probability(p: float) -> float:
    p = _check_rate(p)
    return (1 + 15 * (1 - 2 * p) ** 8) / 16


def output_error(p: float) -> float:
    p = _check_rate(p)
    q = 2 * p - 1
    return (1 + 15 * q**8 + 15 * q**7 + q**15) / (2 * (1 + 15 * (1 - 2 * p) ** 8))


def distill_curve(p: float) -> tuple[float, float]:
    """(p_pass, p_out) of one 15-to-1 round at input error ``p``."""
    return pass_probability(p), output_error(p)


def distill_curve_enumerated(p: float, code: CssCode | None = None) -> tuple[float, float]:
    """Same pair through weight enumerators of the code spaces.

    Z-error patterns pass when H_x c = 0 and fail logically when c lies in
    Ker(H_x) but outside Row(H_z).  p_pass uses the MacWilliams route from
    the small space Row(H_x).
    """
    p = _check_rate(p)
    code = code or css_fixture("reed_muller15")
    wx = weight_enumerator(code.hx)
    p_pass = macwilliams(wx).evaluate(1 - p, p)
    w_row_z = weight_enumerator(code.hz)
    p_good = w_row_z.evaluate(1 - p, p)
    return p_pass, (p_pass - p_good) / p_pass


def distill_threshold(tol: float = 1e-9) -> tuple[float, float]:
    """(p*, octahedron bound) with p_out(p*) = p* on (0, 0.3)."""
    lo, hi = 0.01, 0.3
    f = lambda p: output_error(p) - p  # noqa: E731
    if f(lo) >= 0 or f(hi) <= 0:
        raise RuntimeError("fixed point is not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), OCTAHEDRON_BOUND


@dataclass(frozen=True)
class DistillCost:
    rounds: int
    states: int
    final_error: float
    estimate: float


def distill_cost(p: float, eps: float) -> DistillCost:
    """Rounds of the idealized recursion (sqrt(35) p)^(3^l) / sqrt(35) needed to reach ``eps``."""
    p = _check_rate(p)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p_star, _ = distill_threshold()
    if p >= p_star:
        raise ValueError(f"p = {p} is not below the distillation threshold {p_star:.6f}")
    r = math.sqrt(35)
    est = (math.log(r * eps) / math.log(r * p)) ** COST_EXPONENT if p > 0 and r * eps < 1 else 1.0
    level, err = 0, p
    while err > eps:
        level += 1
        err = (r * p) ** (3**level) / r
        if level > 64:
            raise RuntimeError("distillation recursion did not converge")
    return DistillCost(level, 15**level, err, est)
