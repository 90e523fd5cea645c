"""Streaming logical-bitflip counter.

The residual is swept layer by layer while a bidirectional map of anyon
pairs tracks the endpoints of every path of residual edges met so far. A pair
whose two anyons sit on opposite boundaries is one logical bitflip; a pair on
the same boundary is simply dropped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator

import numpy as np

from .graph import DecodingGraph


class SweepError(RuntimeError):
    """Raised when the sweep sees an impossible state (e.g. leftover anyons)."""


class PairSet:
    """Bidirectional map of disjoint vertex pairs: ``pairs[u] == v`` iff ``pairs[v] == u``."""

    __slots__ = ("_partner",)

    def __init__(self, pairs: Iterable[tuple[Hashable, Hashable]] = ()):
        self._partner: dict = {}
        for u, v in pairs:
            self.add(u, v)

    def add(self, u, v) -> None:
        if u == v:
            raise ValueError(f"self-pair {u!r}")
        if u in self._partner or v in self._partner:
            raise ValueError(f"{u!r} or {v!r} already paired")
        self._partner[u] = v
        self._partner[v] = u

    def remove(self, u) -> None:
        v = self._partner.pop(u)
        del self._partner[v]

    def __contains__(self, u) -> bool:
        return u in self._partner

    def __getitem__(self, u):
        return self._partner[u]

    def __len__(self) -> int:
        return len(self._partner) // 2

    def __iter__(self) -> Iterator[tuple]:
        seen = set()
        for u, v in self._partner.items():
            if u not in seen:
                seen.add(v)
                yield u, v

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairSet):
            return NotImplemented
        return self._partner == other._partner

    def __repr__(self) -> str:
        return f"PairSet({list(self)!r})"

    def check(self) -> None:
        for u, v in self._partner.items():
            if u == v or self._partner.get(v) != u:
                raise SweepError(f"broken pair map at {u!r}")


def load(pairs: PairSet, u, v) -> None:
    """Add the path ``uv`` to ``pairs`` so each anyon stays a path endpoint."""
    if u in pairs:
        w = pairs[u]
        pairs.remove(u)
        if v in pairs:
            x = pairs[v]
            pairs.remove(v)
            pairs.add(w, x)
        elif v != w:
            pairs.add(v, w)
    elif v in pairs:
        x = pairs[v]
        pairs.remove(v)
        pairs.add(u, x)
    else:
        pairs.add(u, v)


@dataclass
class SweepState:
    pairs: PairSet = field(default_factory=PairSet)
    l: int = 0
    t: int = 0


def sweep_layer(state: SweepState, t: int, layer_edges: Iterable[tuple],
                opposite: Callable, same: Callable) -> None:
    """Load the residual edges of layer ``t`` and resolve boundary pairs."""
    if t != state.t + 1:
        raise SweepError(f"layer {t} swept after layer {state.t}")
    pairs = state.pairs
    for u, v in layer_edges:
        load(pairs, u, v)
    new_pairs = PairSet()
    for u, v in pairs:
        if opposite(u, v):
            state.l += 1
        elif not same(u, v):
            load(new_pairs, u, v)
    state.pairs = new_pairs
    state.t = t


def layered_edges(g: DecodingGraph, residual: np.ndarray) -> list[list[tuple[int, int]]]:
    """Endpoints of the residual edges grouped by layer (index 0 is layer 1)."""
    ids = np.flatnonzero(residual)
    u, v, _, t = g.edge_arrays(ids)
    bounds = np.searchsorted(t, np.arange(1, g.num_layers + 2))
    pairs = list(zip(u.tolist(), v.tolist()))
    return [pairs[bounds[k]:bounds[k + 1]] for k in range(g.num_layers)]


def count_logical_bitflips(g: DecodingGraph, residual: np.ndarray, check: bool = False) -> int:
    """Number of logical bitflips in a residual with empty syndrome.

    Raises :class:`SweepError` if anyon pairs survive the final layer, which
    means the residual had a non-empty syndrome.
    """
    state = SweepState()
    for t, edges in enumerate(layered_edges(g, residual), start=1):
        sweep_layer(state, t, edges, g.is_opposite, g.is_same_boundary)
        if check:
            state.pairs.check()
    if len(state.pairs):
        raise SweepError(f"{len(state.pairs)} anyon pairs left after the final layer")
    return state.l
