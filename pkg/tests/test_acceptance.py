"""One PASS/FAIL line per headline criterion.

Run with ``pytest -v tests/test_acceptance.py`` (the lines print even
without ``-s``) or directly with ``python3 tests/test_acceptance.py``.
The two threshold sweeps take several minutes each on one core.
"""

from __future__ import annotations

import sys
from fractions import Fraction

import numpy as np
import pytest

from graph_rules import all_rule_checks
from oracles import (
    all_syndromes,
    distillation_oracle,
    exhaustive_bitflip_posterior,
    min_perfect_matching_weight,
    outcome_probabilities,
    statevector,
    toric_ml_posterior,
)
from topoqec.codes import RM15_HX
from topoqec.concatenated import ConcatenatedCode, bp_decode, concat_analytics, level_error
from topoqec.decoders import MatchingGraph, decode_2d, decode_ml, ml_decode, mwpm
from topoqec.defects import MIN_BRAID_SIZE, braid_cnot_verify
from topoqec.distillation import COST_EXPONENT, distill_curve, distill_threshold
from topoqec.harness import ExperimentConfig, estimate_crossing, run_threshold_experiment
from topoqec.noise import NoiseModel, bias_locator, syndrome_bias
from topoqec.stabilizer import CliffordCircuit, outcome_probability, random_clifford_circuit, weak_sample
from topoqec.surface_code import build_code

_capman = None


def _report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    if _capman is not None:
        with _capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)


@pytest.fixture(autouse=True)
def _uncaptured(request):
    global _capman
    _capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _capman = None


def test_toric_threshold():
    cfg = ExperimentConfig(
        code="toric", noise="iid-z", sizes=(8, 12, 16), p_min=0.08, p_max=0.13, steps=11, trials=10_000, seed=2024
    )
    est = estimate_crossing(run_threshold_experiment(cfg))
    ok = 0.095 <= est.p_th <= 0.110
    _report("toric MWPM threshold", ok, f"crossing {est.p_th:.4f} in [{est.low:.4f}, {est.high:.4f}], target [0.095, 0.110]")
    assert ok


def test_phenomenological_threshold():
    cfg = ExperimentConfig(
        code="toric",
        noise="phenomenological",
        sizes=(4, 6, 8),
        p_min=0.02,
        p_max=0.04,
        steps=11,
        trials=10_000,
        seed=2024,
    )
    est = estimate_crossing(run_threshold_experiment(cfg))
    ok = 0.025 <= est.p_th <= 0.034
    _report("3D phenomenological threshold", ok, f"crossing {est.p_th:.4f}, target [0.025, 0.034]")
    assert ok


def test_phenomenological_bias_locator():
    p = bias_locator("phenomenological", 0.70)
    ok = abs(p - 0.0289) <= 1e-4
    _report("bias locator (1-2p)^6 = 0.70", ok, f"p = {p:.6f}, target 0.0289 +- 0.0001")
    assert ok


@pytest.mark.xfail(strict=True, reason="stated noise ratios give 0.7075 at p2 = 0.0063; see decisions ledger")
def test_circuit_level_bias():
    b = syndrome_bias(NoiseModel.circuit_level(0.0063))
    ok = abs(b - 0.70) <= 0.005
    _report("circuit-level bias at p2 = 0.0063", ok, f"bias {b:.5f}, target 0.70 +- 0.005")
    assert ok


def test_distillation_analytics():
    worst = 0.0
    for p in (0.01, 0.05, 0.1):
        got, want = distill_curve(p), distillation_oracle(RM15_HX, p)
        worst = max(worst, abs(got[0] - want[0]), abs(got[1] - want[1]))
    p_star, _ = distill_threshold()
    ratio = distill_curve(0.01)[1] / (35 * 0.01**3)
    ok = worst <= 1e-12 and abs(p_star - 0.141) <= 1e-3 and 0.97 <= ratio <= 1.10 and abs(COST_EXPONENT - 2.465) < 1e-3
    _report(
        "distillation analytics",
        ok,
        f"oracle gap {worst:.1e}, fixed point {p_star:.5f}, p_out(0.01)/35p^3 {ratio:.4f}, exponent {COST_EXPONENT:.4f}",
    )
    assert ok


def test_stabilizer_oracle_equivalence():
    # strong probabilities on all 256 outcomes; weak frequencies on a
    # three-qubit mask so every nonzero cell has p >= 1/8 and sigma is meaningful
    rng = np.random.default_rng(8)
    shots = 400
    strong_gap, weak_z = 0.0, 0.0
    for _ in range(100):
        c = random_clifford_circuit(8, 60, rng)
        for bits, want in outcome_probabilities(statevector(c), 8, c.measure).items():
            strong_gap = max(strong_gap, abs(outcome_probability(c, bits).value - want))
        mask = tuple(int(q) for q in rng.choice(8, size=3, replace=False))
        masked = CliffordCircuit(8, list(c.gates), mask)
        dense = outcome_probabilities(statevector(masked), 8, mask)
        counts: dict[tuple[int, ...], int] = {}
        for _ in range(shots):
            out = weak_sample(masked, None, rng)
            counts[out] = counts.get(out, 0) + 1
        for bits, p in dense.items():
            f = counts.get(bits, 0) / shots
            if p == 0.0:
                weak_z = max(weak_z, np.inf if f else 0.0)
            elif p < 1.0:
                weak_z = max(weak_z, abs(f - p) / np.sqrt(p * (1 - p) / shots))
    ok = strong_gap <= 1e-10 and weak_z <= 4.0
    _report("stabilizer engine vs dense oracle", ok, f"max |dp| {strong_gap:.1e}, max weak deviation {weak_z:.2f} sigma")
    assert ok


def test_graph_state_rules():
    results = all_rule_checks(12)
    bad = [r for r in results if not r[3]]
    _report("graph-state rules on chains <= 12", not bad, f"{len(results)} checks, {len(bad)} failures")
    assert not bad


def test_mwpm_exactness():
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(1000):
        n = int(rng.choice([2, 4, 6, 8, 10]))
        w = np.triu(rng.integers(0, 50, (n, n)), 1)
        w = w + w.T
        g = MatchingGraph.complete(w)
        if g.weight_of(mwpm(g)) != min_perfect_matching_weight(w):
            bad += 1
    _report("MWPM exactness", bad == 0, f"1000 instances, {bad} mismatches")
    assert bad == 0


def test_ml_optimality():
    code = build_code("toric", 3)
    h = code.x_checks.astype(np.int64)
    rng = np.random.default_rng(12)
    ml_ok = mw_ok = 0
    trials = 10_000
    for _ in range(trials):
        e = (rng.random(code.n_qubits) < 0.1).astype(np.uint8)
        s = ((h @ e) & 1).astype(np.uint8)
        ml_ok += decode_ml(code, s, 0.1, error=e).success
        mw_ok += decode_2d(code, s, 0.1, error=e).success
    gap = 0.0
    for _ in range(20):
        e = (rng.random(code.n_qubits) < 0.15).astype(np.uint8)
        s = ((h @ e) & 1).astype(np.uint8)
        r = ml_decode(code, s, 0.1)
        gap = max(gap, float(np.max(np.abs(r.posteriors - toric_ml_posterior(code, s, r.reference, 0.1)))))
    ok = ml_ok >= mw_ok and gap <= 1e-10
    _report(
        "ML decoder optimality",
        ok,
        f"success ML {ml_ok / trials:.4f} vs MWPM {mw_ok / trials:.4f}, posterior gap {gap:.1e} on 20 syndromes",
    )
    assert ok


def test_braiding_cnot():
    once = braid_cnot_verify(MIN_BRAID_SIZE, braids=1, rng=np.random.default_rng(13))
    twice = braid_cnot_verify(MIN_BRAID_SIZE, braids=2, rng=np.random.default_rng(14))
    ok = once.passed and twice.passed
    _report(
        "braiding CNOT",
        ok,
        f"size {MIN_BRAID_SIZE}, single braid {sum(once.checks.values())}/4, double braid {sum(twice.checks.values())}/4",
    )
    assert ok


def test_bp_decoder():
    cc = ConcatenatedCode.build("bitflip3", 2)
    worst, count = 0.0, 0
    for synd in all_syndromes(cc):
        res = bp_decode(cc, synd, 0.1)
        worst = max(worst, float(np.max(np.abs(res.posterior - exhaustive_bitflip_posterior(cc, synd, 0.1)))))
        count += 1
    ok = worst <= 1e-12
    _report("BP vs exhaustive posterior", ok, f"{count} syndrome patterns, max gap {worst:.1e}")
    assert ok


def test_concatenation_analytics():
    C = 10_000
    fixed = concat_analytics(C, 7, Fraction(1, C), 10**6)
    p3 = level_error(C, Fraction(1, 10**5), 3)
    ok = all(e == Fraction(1, C) for e in fixed.level_errors) and p3 == (C * Fraction(1, 10**5)) ** 8 / C
    _report("concatenation analytics", ok, f"p = 1/C fixed, p^(3) = {p3}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main(["-q", __file__]))
