"""Topological quantum error correction: stabilizer simulation, surface codes, decoders and distillation."""

from __future__ import annotations

from .chain_complex import Chain, CubicComplex, HomologyClass, Surface, boundary, build_surface, classify_cycle, coboundary, dual
from .concatenated import ConcatenatedCode, bp_decode, concat_analytics
from .decoders import DecodeResult, MatchingGraph, decode_2d, decode_3d, ml_decode, mwpm
from .defects import DefectState, braid_cnot_verify, defect_operation
from .distillation import (
    CssCode,
    WeightEnumerator,
    build_css,
    distill_cost,
    distill_curve,
    distill_threshold,
    macwilliams,
    weight_enumerator,
)
from .harness import ExperimentConfig, ResultTable, estimate_crossing, run_threshold_experiment
from .noise import NoiseModel, SpaceTimeError, coupling_from_p, sample_error, sample_spacetime_error, syndrome_bias
from .pauli import PauliProduct, commutes, multiply, symplectic_product
from .stabilizer import CliffordCircuit, StabilizerTableau, apply_clifford, measure_pauli
from .surface_code import SurfaceCodeLayout, Syndrome, build_code, residual_class, syndrome_of

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "CliffordCircuit",
    "ConcatenatedCode",
    "CssCode",
    "CubicComplex",
    "DecodeResult",
    "DefectState",
    "ExperimentConfig",
    "HomologyClass",
    "MatchingGraph",
    "NoiseModel",
    "PauliProduct",
    "ResultTable",
    "SpaceTimeError",
    "StabilizerTableau",
    "Surface",
    "SurfaceCodeLayout",
    "Syndrome",
    "WeightEnumerator",
    "apply_clifford",
    "boundary",
    "bp_decode",
    "braid_cnot_verify",
    "build_code",
    "build_css",
    "build_surface",
    "classify_cycle",
    "coboundary",
    "commutes",
    "concat_analytics",
    "coupling_from_p",
    "decode_2d",
    "decode_3d",
    "defect_operation",
    "distill_cost",
    "distill_curve",
    "distill_threshold",
    "dual",
    "estimate_crossing",
    "macwilliams",
    "measure_pauli",
    "ml_decode",
    "multiply",
    "mwpm",
    "residual_class",
    "run_threshold_experiment",
    "sample_error",
    "sample_spacetime_error",
    "symplectic_product",
    "syndrome_bias",
    "syndrome_of",
    "weight_enumerator",
]
