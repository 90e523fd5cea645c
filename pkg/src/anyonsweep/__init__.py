"""Emulated surface-code memory experiments and logical error rate estimation."""
from .decoder import forward_decode, residual, uf_decode
from .estimate import (
    CheckpointRecord,
    FitResult,
    RateEstimate,
    estimate_new,
    fit_decay,
    parity_failure,
    wilson_interval,
)
from .graph import DecodingGraph, Edge, EdgeKind, Side, VertexId, build_graph, edges_in_layer
from .noise import NoiseParams, sample_noise, syndrome_of
from .sweep import PairSet, SweepError, SweepState, count_logical_bitflips, load, sweep_layer

__all__ = [
    "CheckpointRecord", "DecodingGraph", "Edge", "EdgeKind", "FitResult", "NoiseParams",
    "PairSet", "RateEstimate", "Side", "SweepError", "SweepState", "VertexId", "build_graph",
    "count_logical_bitflips", "edges_in_layer", "estimate_new", "fit_decay", "forward_decode",
    "load", "parity_failure", "residual", "sample_noise", "sweep_layer", "syndrome_of",
    "uf_decode", "wilson_interval",
]
