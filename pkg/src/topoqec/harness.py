"""Monte Carlo threshold sweeps with per-trial random streams, CSV tables and crossing estimates."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .decoders import ML_MAX_GENERATORS, _rate_for, decode_3d_recovery, decode_batch, ml_decode
from .noise import NoiseModel, sample_error, spacetime_from_errors
from .surface_code import build_code

CSV_COLUMNS = ("code", "size", "p", "trials", "failures", "logical_error_rate", "stderr")
NOISE_NAMES = {
    "iid-z": "iid_z",
    "iid_z": "iid_z",
    "iid-xz": "iid_xz",
    "iid_xz": "iid_xz",
    "depolarizing": "depolarizing",
    "phenomenological": "phenomenological",
}
CHUNK = 1000


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class InconclusiveError(RuntimeError):
    """The data do not bracket a crossing."""


class ResourceError(ConfigError):
    """Size too large for the chosen decoder."""


def trial_rng(seed: int, size: int, p_index: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, keyed by (size, p index, trial)."""
    ss = np.random.SeedSequence(seed, spawn_key=(size, p_index, trial))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class ExperimentConfig:
    code: str = "toric"
    sizes: tuple[int, ...] = (8, 12, 16)
    p_min: float = 0.08
    p_max: float = 0.13
    steps: int = 11
    trials: int = 10_000
    noise: str = "iid-z"
    decoder: str = "mwpm"
    seed: int = 0
    rounds: int | None = None  # None: rounds = size for space-time noise
    out: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        self.sizes = tuple(int(s) for s in self.sizes)
        self.validate()

    def validate(self) -> None:
        if self.code not in ("toric", "planar"):
            raise ConfigError(f"code must be toric or planar, got {self.code!r}")
        if not self.sizes or min(self.sizes) < 2:
            raise ConfigError("sizes must all be >= 2")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.noise not in NOISE_NAMES:
            raise ConfigError(f"unknown noise {self.noise!r}")
        if self.decoder not in ("mwpm", "ml"):
            raise ConfigError(f"unknown decoder {self.decoder!r}")
        if self.decoder == "ml" and self.noise == "phenomenological":
            raise ConfigError("the ML decoder handles perfect syndromes only")
        if self.rounds is not None and self.rounds < 1:
            raise ConfigError("rounds must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        grid = self.p_grid
        if grid[0] < 0 or grid[-1] >= 0.5 or (len(grid) > 1 and not np.all(np.diff(grid) > 0)):
            raise ConfigError("p grid must be strictly increasing within [0, 0.5)")

    @property
    def p_grid(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([float(self.p_min)])
        return np.linspace(float(self.p_min), float(self.p_max), int(self.steps))

    def rounds_for(self, size: int) -> int:
        return size if self.rounds is None else self.rounds

    def model(self, p: float) -> NoiseModel:
        return NoiseModel.from_config(NOISE_NAMES[self.noise], p)

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        noise = d.pop("noise", None)
        if isinstance(noise, dict):
            # the swept rate replaces any fixed probabilities in the table
            d["noise"] = str(noise.get("kind", "iid-z"))
        elif noise is not None:
            d["noise"] = noise
        if isinstance(d.get("sizes"), str):
            d["sizes"] = parse_sizes(d["sizes"])
        grid = d.pop("p", None)
        if isinstance(grid, dict):
            d.setdefault("p_min", grid.get("min"))
            d.setdefault("p_max", grid.get("max"))
            d.setdefault("steps", grid.get("steps"))
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_toml(cls, path: str | os.PathLike) -> ExperimentConfig:
        try:
            import tomllib
        except ModuleNotFoundError:  # Python 3.10
            import tomli as tomllib
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data.get("experiment", data))


def parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in str(text).split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"bad size list {text!r}") from exc


@dataclass
class ResultRow:
    code: str
    size: int
    p: float
    trials: int
    failures: int
    failures_by_type: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0 <= self.failures <= self.trials:
            raise ValueError("failures must lie in [0, trials]")

    @property
    def logical_error_rate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        r = self.logical_error_rate
        return math.sqrt(r * (1 - r) / self.trials)


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return sorted({r.size for r in self.rows})

    def curve(self, size: int) -> tuple[np.ndarray, np.ndarray]:
        rows = sorted((r for r in self.rows if r.size == size), key=lambda r: r.p)
        return np.array([r.p for r in rows]), np.array([r.logical_error_rate for r in rows])

    def to_csv(self, path: str | os.PathLike | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.code, r.size, f"{r.p:.10g}", r.trials, r.failures, f"{r.logical_error_rate:.10g}", f"{r.stderr:.10g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, text_or_path) -> ResultTable:
        text = str(text_or_path)
        if "\n" not in text and Path(text).exists():
            text = Path(text).read_text()
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"CSV header must be {','.join(CSV_COLUMNS)}")
        rows = [
            ResultRow(r["code"], int(r["size"]), float(r["p"]), int(r["trials"]), int(r["failures"]))
            for r in reader
        ]
        return cls(rows)


# ---------------------------------------------------------------------------
# trial execution


def _classes(errors: np.ndarray, recoveries: np.ndarray, conj: np.ndarray) -> np.ndarray:
    return ((errors ^ recoveries).astype(np.int64) @ conj.T.astype(np.int64)) & 1


def _run_chunk(cfg: ExperimentConfig, size: int, p_index: int, start: int, stop: int) -> dict[str, int]:
    """Failure counts for trials [start, stop) of one (size, p) point."""
    p = float(cfg.p_grid[p_index])
    model = cfg.model(p)
    code = build_code(cfg.code, size)
    counts = {"any": 0, "Z": 0, "X": 0}
    n = stop - start
    if n <= 0:
        return counts
    if model.kind == "phenomenological":
        rounds = cfg.rounds_for(size)
        hx = code.x_checks
        conj = code.conjugate_logicals("Z")
        for t in range(start, stop):
            rng = trial_rng(cfg.seed, size, p_index, t)
            data = (rng.random((rounds, code.n_qubits)) < model.p_data).astype(np.uint8)
            meas = (rng.random((rounds, hx.shape[0])) < model.p_meas).astype(np.uint8)
            st = spacetime_from_errors(code, data, meas)
            rec = decode_3d_recovery(code, st.defects, model)
            bad = bool(_classes(st.final_error[None], rec[None], conj).any())
            counts["Z"] += bad
            counts["any"] += bad
        return counts
    xs = np.zeros((n, code.n_qubits), np.uint8)
    zs = np.zeros((n, code.n_qubits), np.uint8)
    for i, t in enumerate(range(start, stop)):
        e = sample_error(model, code, trial_rng(cfg.seed, size, p_index, t))
        xs[i], zs[i] = e.x, e.z
    fail = np.zeros(n, bool)
    for basis, errs in (("Z", zs), ("X", xs)):
        if basis == "X" and model.kind == "iid_xz" and model.p_x == 0:
            continue
        checks = code.checks_for(basis).astype(np.int64)
        synd = ((errs.astype(np.int64) @ checks.T) & 1).astype(np.uint8)
        conj = code.conjugate_logicals(basis)
        rate = _rate_for(model, basis)
        if cfg.decoder == "mwpm":
            rec = decode_batch(code, synd, rate, basis=basis)
        else:
            rec = np.array([ml_decode(code, s, min(rate, 0.5), basis=basis).recovery for s in synd], np.uint8)
        bad = _classes(errs, rec, conj).any(axis=1)
        counts[basis] += int(bad.sum())
        fail |= bad
    counts["any"] = int(fail.sum())
    return counts


def _check_resources(cfg: ExperimentConfig) -> None:
    if cfg.decoder == "ml":
        from . import gf2

        for size in cfg.sizes:
            code = build_code(cfg.code, size)
            r = max(gf2.rank(code.z_checks), gf2.rank(code.x_checks))
            if r > ML_MAX_GENERATORS:
                raise ResourceError(f"ML decoding of {cfg.code} size {size} needs 2^{r} terms per class")


def run_threshold_experiment(cfg: ExperimentConfig, progress=None) -> ResultTable:
    """Sweep sizes x p grid; the table is identical for any worker count."""
    cfg.validate()
    _check_resources(cfg)
    jobs = []
    for size in cfg.sizes:
        for pi in range(len(cfg.p_grid)):
            for start in range(0, cfg.trials, CHUNK):
                jobs.append((size, pi, start, min(cfg.trials, start + CHUNK)))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_chunk, cfg, *job) for job in jobs]
            results = [f.result() for f in futures]
    else:
        results = []
        for job in jobs:
            results.append(_run_chunk(cfg, *job))
            if progress is not None:
                progress(job)
    totals: dict[tuple[int, int], dict[str, int]] = {}
    for (size, pi, _, _), res in zip(jobs, results):
        acc = totals.setdefault((size, pi), {"any": 0, "Z": 0, "X": 0})
        for k, v in res.items():
            acc[k] += v
    rows = []
    for size in cfg.sizes:
        for pi, p in enumerate(cfg.p_grid):
            acc = totals[(size, pi)]
            rows.append(
                ResultRow(cfg.code, size, float(p), cfg.trials, acc["any"], {"Z": acc["Z"], "X": acc["X"]})
            )
    return ResultTable(rows)


# ---------------------------------------------------------------------------
# crossing estimate


@dataclass(frozen=True)
class CrossingEstimate:
    p_th: float
    low: float
    high: float
    pair_crossings: tuple[tuple[int, int, float], ...]


def _pair_crossing(p: np.ndarray, small: np.ndarray, large: np.ndarray) -> float | None:
    """First p where the larger code's curve passes from below to above the smaller one."""
    d = large - small
    for i in range(len(p) - 1):
        if d[i] == 0 and d[i + 1] > 0:
            return float(p[i])
        if d[i] < 0 < d[i + 1] or (d[i] < 0 and d[i + 1] == 0):
            return float(p[i] + (p[i + 1] - p[i]) * (-d[i]) / (d[i + 1] - d[i]))
    return None


def estimate_crossing(t: ResultTable) -> CrossingEstimate:
    """Median of the consecutive-size pairwise crossings, with the min-max spread."""
    sizes = t.sizes
    if len(sizes) < 2:
        raise InconclusiveError("need at least two sizes")
    found = []
    for a, b in zip(sizes, sizes[1:]):
        pa, ra = t.curve(a)
        pb, rb = t.curve(b)
        if len(pa) < 2 or not np.array_equal(pa, pb):
            raise InconclusiveError(f"sizes {a} and {b} need a common grid of at least two p values")
        x = _pair_crossing(pa, ra, rb)
        if x is None:
            raise InconclusiveError(f"no crossing between sizes {a} and {b} inside the p grid")
        found.append((a, b, x))
    xs = [f[2] for f in found]
    return CrossingEstimate(float(np.median(xs)), min(xs), max(xs), tuple(found))


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(cfg, **kw)
