"""Command-line entry point: threshold, decode, simulate, distill, codeinfo."""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_CONFIG, EXIT_INCONCLUSIVE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="topoqec", description="Topological quantum error correction toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("threshold", help="Monte Carlo threshold sweep, CSV output")
    t.add_argument("--config", help="TOML file with experiment settings (flags override it)")
    t.add_argument("--code", choices=["toric", "planar"])
    t.add_argument("--sizes")
    t.add_argument("--p-min", type=float)
    t.add_argument("--p-max", type=float)
    t.add_argument("--steps", type=int)
    t.add_argument("--trials", type=int)
    t.add_argument("--noise", choices=["iid-z", "iid-xz", "depolarizing", "phenomenological"])
    t.add_argument("--decoder", choices=["mwpm", "ml"])
    t.add_argument("--rounds", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--workers", type=int)
    t.add_argument("--out")

    d = sub.add_parser("decode", help="decode one syndrome given as JSON")
    d.add_argument("--code", choices=["toric", "planar", "bitflip"], required=True)
    d.add_argument("--size", type=int, required=True)
    d.add_argument("--syndrome", required=True, help="JSON file: {basis, vertices, faces} or {basis, bits}")
    d.add_argument("--decoder", choices=["mwpm", "ml"], default="mwpm")
    d.add_argument("--p", type=float, default=0.1)
    d.add_argument("--dump-graph", help="write the matching graph in line format to this file")

    s = sub.add_parser("simulate", help="sample a Clifford circuit with terminal Z measurements")
    s.add_argument("--circuit", required=True)
    s.add_argument("--shots", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("distill", help="15-to-1 distillation report")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--eps", type=float, default=1e-15)

    c = sub.add_parser("codeinfo", help="parameters of a surface code")
    c.add_argument("--code", choices=["toric", "planar", "bitflip"], required=True)
    c.add_argument("--size", type=int, required=True)
    return ap


def _threshold(a) -> int:
    from .harness import (
        ExperimentConfig,
        InconclusiveError,
        estimate_crossing,
        parse_sizes,
        run_threshold_experiment,
    )

    base = ExperimentConfig.from_toml(a.config) if a.config else ExperimentConfig()
    over = {
        "code": a.code,
        "sizes": parse_sizes(a.sizes) if a.sizes else None,
        "p_min": a.p_min,
        "p_max": a.p_max,
        "steps": a.steps,
        "trials": a.trials,
        "noise": a.noise,
        "decoder": a.decoder,
        "rounds": a.rounds,
        "seed": a.seed,
        "workers": a.workers,
        "out": a.out,
    }
    fields = {k: getattr(base, k) for k in base.__dataclass_fields__}
    fields.update({k: v for k, v in over.items() if v is not None})
    cfg = ExperimentConfig(**fields)
    table = run_threshold_experiment(cfg)
    text = table.to_csv(cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    if len(cfg.sizes) < 2:
        return EXIT_OK
    try:
        est = estimate_crossing(table)
    except InconclusiveError as exc:
        print(json.dumps({"crossing": None, "reason": str(exc)}), file=sys.stderr)
        return EXIT_INCONCLUSIVE
    report = {"crossing": est.p_th, "interval": [est.low, est.high]}
    print(json.dumps(report), file=sys.stderr if cfg.out is None else sys.stdout)
    return EXIT_OK


def _decode(a) -> int:
    from .decoders import decode_2d, decode_ml
    from .surface_code import Syndrome, build_code

    code = build_code(a.code, a.size)
    try:
        spec = json.loads(Path(a.syndrome).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read syndrome file: {exc}") from exc
    basis = spec.get("basis", "X" if code.z_check_on_vertices else "Z")
    if "bits" in spec:
        synd = np.array(spec["bits"], np.uint8)
    else:
        synd = Syndrome(tuple(spec.get("vertices", ())), tuple(spec.get("faces", ())))
    error = None
    if "error" in spec:
        error = np.zeros(code.n_qubits, np.uint8)
        error[list(spec["error"])] = 1
    if a.decoder == "ml":
        res = decode_ml(code, synd, a.p, basis=basis, error=error)
    else:
        res = decode_2d(code, synd, a.p, basis=basis, error=error, keep_graph=bool(a.dump_graph))
        if a.dump_graph:
            Path(a.dump_graph).write_text(res.graph.dump())
    print(json.dumps(res.to_json()))
    return EXIT_OK


def _simulate(a) -> int:
    from .stabilizer import CliffordCircuit, weak_sample

    try:
        circuit = CliffordCircuit.parse(Path(a.circuit).read_text())
    except OSError as exc:
        raise ValueError(f"cannot read circuit: {exc}") from exc
    if a.shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(a.seed)
    counts = Counter("".join(str(b) for b in weak_sample(circuit, None, rng)) for _ in range(a.shots))
    print(json.dumps({"qubits": circuit.n, "measured": list(circuit.measure), "shots": a.shots, "counts": dict(sorted(counts.items()))}))
    return EXIT_OK


def _distill(a) -> int:
    from .distillation import OCTAHEDRON_BOUND, distill_cost, distill_curve, distill_threshold

    p_pass, p_out = distill_curve(a.p)
    p_star, _ = distill_threshold()
    report = {"p": a.p, "p_pass": p_pass, "p_out": p_out, "threshold": p_star, "octahedron_bound": OCTAHEDRON_BOUND}
    if a.p < p_star:
        cost = distill_cost(a.p, a.eps)
        report.update(eps=a.eps, rounds=cost.rounds, states=cost.states, final_error=cost.final_error, estimate=cost.estimate)
    else:
        report.update(eps=a.eps, rounds=None, states=None)
    print(json.dumps(report))
    return EXIT_OK


def _codeinfo(a) -> int:
    from .surface_code import build_code, code_info

    print(json.dumps(code_info(build_code(a.code, a.size))))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    from .harness import ConfigError

    args = _parser().parse_args(argv)
    handler = {"threshold": _threshold, "decode": _decode, "simulate": _simulate, "distill": _distill, "codeinfo": _codeinfo}
    try:
        return handler[args.command](args)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
