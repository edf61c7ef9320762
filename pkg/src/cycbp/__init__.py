"""Cyclically equivariant neural BP decoding for BCH and punctured RM codes."""

from .galois import BinaryPoly, GaloisField, field_new, minimal_polynomial, poly_divide, poly_lcm
from .codes import (
    CodeConstructionError,
    CyclicCode,
    bch_code,
    code_from_name,
    cyclic_parity_matrix,
    generator_matrix,
    is_codeword,
    prm_code,
    random_extended_matrix,
    standard_parity_matrix,
)
from .tanner import TannerGraph, build_graph, shift_index
from .decoder import WeightBank, bp_decode, boost, hard_decision, neural_bp_decode
from .channel import ChannelSample, sample, sample_llrs, snr_to_sigma, stream_rng
from .train import Adam, TrainConfig, TrainResult, TrainingDiverged, backward, graph_for, loss, train
from .listdec import AffinePermutationSet, build_affine_set, extended_is_codeword, list_decode
from .harness import (
    ConfigError,
    DataError,
    ExperimentConfig,
    ExperimentResult,
    ResultRow,
    emit_curve,
    load_weights,
    run_experiment,
    save_weights,
    wilson_interval,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Adam", "AffinePermutationSet", "BinaryPoly", "ChannelSample",
    "CodeConstructionError", "ConfigError", "CyclicCode", "DataError",
    "ExperimentConfig", "ExperimentResult", "GaloisField", "ResultRow",
    "TannerGraph", "TrainConfig", "TrainResult", "TrainingDiverged",
    "WeightBank", "backward", "bch_code", "boost", "bp_decode",
    "build_affine_set", "build_graph", "code_from_name",
    "cyclic_parity_matrix", "emit_curve", "extended_is_codeword",
    "field_new", "generator_matrix", "graph_for", "hard_decision",
    "is_codeword", "list_decode", "load_weights", "loss",
    "minimal_polynomial", "neural_bp_decode", "poly_divide", "poly_lcm",
    "prm_code", "random_extended_matrix", "run_experiment", "sample",
    "sample_llrs", "save_weights", "shift_index", "snr_to_sigma",
    "standard_parity_matrix", "stream_rng", "train", "wilson_interval",
    "write_csv",
]
