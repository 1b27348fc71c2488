"""Pauli and space-time noise sampling plus closed-form syndrome-bias formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain_complex import Chain, CubicComplex
from .surface_code import SurfaceCodeLayout

KINDS = ("iid_xz", "depolarizing", "phenomenological", "circuit_level")
_ALIASES = {"iid-z": "iid_z", "iid_z": "iid_z", "iid-xz": "iid_xz", "phenom": "phenomenological"}


def _check_p(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"{name} = {p} is outside [0, 1/2]")
    return p


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p_x: float = 0.0
    p_z: float = 0.0
    p: float = 0.0
    p_data: float = 0.0
    p_meas: float = 0.0
    p2: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        for name in ("p_x", "p_z", "p", "p_data", "p_meas", "p2"):
            _check_p(name, getattr(self, name))

    @classmethod
    def iid_xz(cls, p_x: float, p_z: float) -> NoiseModel:
        return cls("iid_xz", p_x=p_x, p_z=p_z)

    @classmethod
    def iid_z(cls, p: float) -> NoiseModel:
        return cls("iid_xz", p_z=p)

    @classmethod
    def depolarizing(cls, p: float) -> NoiseModel:
        return cls("depolarizing", p=p)

    @classmethod
    def phenomenological(cls, p_data: float, p_meas: float | None = None) -> NoiseModel:
        return cls("phenomenological", p_data=p_data, p_meas=p_data if p_meas is None else p_meas)

    @classmethod
    def circuit_level(cls, p2: float) -> NoiseModel:
        return cls("circuit_level", p2=p2)

    # circuit-level ratios p1 = p2 = (3/2) p_prep = (3/2) p_meas
    @property
    def p1(self) -> float:
        return self.p2

    @property
    def p_prep(self) -> float:
        return self.p2 * 2.0 / 3.0

    @property
    def p_meas_circuit(self) -> float:
        return self.p2 * 2.0 / 3.0

    @property
    def is_spacetime(self) -> bool:
        return self.kind == "phenomenological"

    def with_rate(self, p: float) -> NoiseModel:
        """Same family at a new swept rate (used by threshold sweeps)."""
        if self.kind == "iid_xz":
            if self.p_x and not self.p_z:
                return NoiseModel.iid_xz(p, 0.0)
            if self.p_x and self.p_z:
                return NoiseModel.iid_xz(p, p)
            return NoiseModel.iid_z(p)
        if self.kind == "depolarizing":
            return NoiseModel.depolarizing(p)
        if self.kind == "phenomenological":
            return NoiseModel.phenomenological(p, p)
        return NoiseModel.circuit_level(p)

    @classmethod
    def from_config(cls, spec: dict | str, p: float | None = None) -> NoiseModel:
        """Build from ``{kind = ..., ...}`` or a CLI name like ``iid-z``."""
        raw = {"kind": spec} if isinstance(spec, str) else dict(spec)
        kind = str(raw.pop("kind", ""))
        kind = _ALIASES.get(kind, kind.replace("-", "_"))
        rate = 0.0 if p is None else p
        if kind == "iid_z":
            return cls.iid_z(raw.get("p", raw.get("p_z", rate)))
        if kind == "iid_xz":
            return cls.iid_xz(raw.get("p_x", rate), raw.get("p_z", rate))
        if kind == "depolarizing":
            return cls.depolarizing(raw.get("p", rate))
        if kind == "phenomenological":
            pd = raw.get("p_data", raw.get("p", rate))
            return cls.phenomenological(pd, raw.get("p_meas", pd))
        if kind == "circuit_level":
            return cls.circuit_level(raw.get("p2", rate))
        raise ValueError(f"unknown noise kind {kind!r}")


@dataclass
class ErrorSample:
    """X- and Z-error chains on the qubits (a Y error sets both)."""

    x: np.ndarray
    z: np.ndarray

    def chains(self) -> tuple[Chain, Chain]:
        return Chain(1, self.x, dual=True), Chain(1, self.z)


def sample_error(model: NoiseModel, code: SurfaceCodeLayout, rng, shots: int | None = None) -> ErrorSample:
    """Independent per-qubit Pauli errors; with ``shots`` the arrays gain a leading axis."""
    n = code.n_qubits
    shape = (n,) if shots is None else (shots, n)
    if model.kind == "iid_xz":
        x = (rng.random(shape) < model.p_x).astype(np.uint8)
        z = (rng.random(shape) < model.p_z).astype(np.uint8)
        return ErrorSample(x, z)
    if model.kind == "depolarizing":
        u = rng.random(shape)
        hit = u < model.p
        if model.p == 0:
            return ErrorSample(np.zeros(shape, np.uint8), np.zeros(shape, np.uint8))
        which = np.floor(u / model.p * 3).astype(np.int64)  # 0: X, 1: Y, 2: Z
        x = (hit & (which <= 1)).astype(np.uint8)
        z = (hit & (which >= 1)).astype(np.uint8)
        return ErrorSample(x, z)
    raise ValueError(f"{model.kind} noise has no 2D code-capacity sampler")


@dataclass
class SpaceTimeError:
    """Phenomenological history over ``rounds`` noisy rounds plus one perfect round.

    data[t, e]: Z error on qubit e in round t+1.  meas[t, k]: flip of check k's
    reading in round t+1.  measured[t, k] = m_k(t+1) for t = 0..rounds, the
    last row being the perfect round.  defects[t, k] = m_k(t+1) xor m_k(t),
    with m_k(0) = 0.
    """

    data: np.ndarray
    meas: np.ndarray
    measured: np.ndarray
    defects: np.ndarray

    @property
    def rounds(self) -> int:
        return int(self.data.shape[0])

    @property
    def final_error(self) -> np.ndarray:
        return (np.bitwise_xor.reduce(self.data, axis=0) if self.rounds else self.data.sum(0)).astype(np.uint8)

    def chain(self, cc: CubicComplex) -> Chain:
        return cc.error_chain(self.data, self.meas)


def sample_spacetime_error(model: NoiseModel, code: SurfaceCodeLayout, rounds: int, rng) -> SpaceTimeError:
    """Z errors detected by the X checks under phenomenological noise."""
    if model.kind != "phenomenological":
        raise ValueError("space-time sampling needs the phenomenological model")
    if rounds < 1:
        raise ValueError("need at least one round")
    h = code.x_checks.astype(np.int64)
    nq, nc = code.n_qubits, h.shape[0]
    data = (rng.random((rounds, nq)) < model.p_data).astype(np.uint8)
    meas = (rng.random((rounds, nc)) < model.p_meas).astype(np.uint8)
    return spacetime_from_errors(code, data, meas)


def spacetime_from_errors(code: SurfaceCodeLayout, data: np.ndarray, meas: np.ndarray) -> SpaceTimeError:
    h = code.x_checks.astype(np.int64)
    acc = np.bitwise_xor.accumulate(data, axis=0).astype(np.int64)
    true = (acc @ h.T) & 1
    measured = np.vstack([true ^ meas, true[-1:]]).astype(np.uint8)
    prev = np.vstack([np.zeros((1, h.shape[0]), np.uint8), measured[:-1]])
    return SpaceTimeError(data.astype(np.uint8), meas.astype(np.uint8), measured, measured ^ prev)


def syndrome_bias(model: NoiseModel) -> float:
    """Expectation of (-1)^{s} for one differenced syndrome bit."""
    if model.kind == "phenomenological":
        # four data qubits and two readings enter each differenced bit
        return (1 - 2 * model.p_data) ** 4 * (1 - 2 * model.p_meas) ** 2
    if model.kind == "circuit_level":
        p2 = model.p2
        return (1 - 2 * model.p_prep - 2 * model.p_meas_circuit - 8 * p2) ** 2 * (1 - 8 * p2) ** 4
    raise ValueError(f"syndrome bias is not defined for {model.kind} noise")


def bias_locator(kind: str, target: float = 0.70) -> float:
    """The rate at which the bias formula of ``kind`` drops to ``target``."""
    from scipy.optimize import brentq

    def f(p: float) -> float:
        m = NoiseModel.phenomenological(p, p) if kind == "phenomenological" else NoiseModel.circuit_level(p)
        return syndrome_bias(m) - target

    hi = 0.5 if kind == "phenomenological" else 0.08
    return float(brentq(f, 0.0, hi, xtol=1e-14))


def coupling_from_p(p: float) -> float:
    """J with e^{-J} = sqrt(p / (1 - p))."""
    p = float(p)
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must lie in (0, 1/2), got {p}")
    return -0.5 * math.log(p / (1 - p))
