"""Phenomenological edge noise and syndromes.

An ``EdgeSet`` is a boolean mask over a graph's edge ids; iterating
``np.flatnonzero(mask)`` visits edges in layer order. A syndrome is the sorted
array of bulk vertex ids with odd flipped-edge degree.

Random streams come from numpy's counter-based Philox generator keyed by
``SeedSequence([seed, shot])``, so a shot's noise never depends on which
worker sampled it or in what order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DecodingGraph, EdgeKind


@dataclass(frozen=True)
class NoiseParams:
    p: float
    q: float | None = None
    seed: int = 0
    shot: int = 0

    def __post_init__(self):
        if self.q is None:
            object.__setattr__(self, "q", self.p)
        for name in ("p", "q"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {value}")


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shot])))


def empty_edges(g: DecodingGraph) -> np.ndarray:
    return np.zeros(g.num_edges, dtype=bool)


def edge_set(g: DecodingGraph, ids) -> np.ndarray:
    mask = empty_edges(g)
    ids = np.asarray(list(ids), dtype=np.int64)
    # toggle so that repeated ids cancel (GF(2) semantics)
    np.bitwise_xor.at(mask, ids, True)
    return mask


def flip_probabilities(g: DecodingGraph, p: float, q: float) -> np.ndarray:
    lat = g.lat
    first = np.full(lat.n_space, p)
    rest = np.where(lat.kind == EdgeKind.TIME, q, p)
    return np.concatenate([first, np.tile(rest, g.n)])


def sample_noise(g: DecodingGraph, params: NoiseParams) -> np.ndarray:
    """Flip each space edge with probability ``p`` and each time edge with ``q``."""
    if params.p == 0 and params.q == 0:
        return empty_edges(g)
    u = shot_rng(params.seed, params.shot).random(g.num_edges)
    return u < flip_probabilities(g, params.p, params.q)


def syndrome_mask(g: DecodingGraph, flips: np.ndarray) -> np.ndarray:
    """Boolean mask over vertices: True at bulk vertices of odd degree in ``flips``."""
    ids = np.flatnonzero(flips)
    u, v, _, _ = g.edge_arrays(ids)
    counts = np.bincount(np.concatenate([u, v]), minlength=g.num_vertices)
    mask = (counts & 1).astype(bool)
    mask.reshape(g.num_layers, g.lat.n_vertices)[:, g.lat.n_bulk:] = False
    return mask


def syndrome_of(g: DecodingGraph, flips: np.ndarray) -> np.ndarray:
    return np.flatnonzero(syndrome_mask(g, flips))
