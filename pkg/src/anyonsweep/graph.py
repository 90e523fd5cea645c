"""Space-time decoding graph for a planar surface-code memory experiment.

Each layer holds a ``d x (d-1)`` grid of bulk detectors. Horizontal chains of
``d`` edges run from the Left boundary to the Right boundary, vertical edges
couple neighbouring rows and time edges couple a detector to itself one round
later. Layers ``1..n`` are noisy rounds; layer ``n+1`` is the perfect readout
closure.

Vertices and edges are plain integers so that long experiments (10^5 rounds
and more) stay cheap. :class:`VertexId` and :class:`Edge` give the readable
form of an id.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np


class Side(enum.IntEnum):
    LEFT = 1
    RIGHT = 2


class EdgeKind(enum.IntEnum):
    SPACE_H = 0
    SPACE_V = 1
    TIME = 2


class VertexId(NamedTuple):
    """Readable vertex label.

    Bulk vertices have ``side=None`` and a column; boundary vertices have a
    side and ``col=None``.
    """

    t: int
    row: int
    col: int | None = None
    side: Side | None = None

    @property
    def is_boundary(self) -> bool:
        return self.side is not None

    def __str__(self) -> str:
        if self.side is None:
            return f"({self.t},{self.row},{self.col})"
        name = "Left" if self.side == Side.LEFT else "Right"
        return f"{name}({self.t},{self.row})"


def bulk(t: int, row: int, col: int) -> VertexId:
    return VertexId(t, row, col, None)


def left(t: int, row: int) -> VertexId:
    return VertexId(t, row, None, Side.LEFT)


def right(t: int, row: int) -> VertexId:
    return VertexId(t, row, None, Side.RIGHT)


class Edge(NamedTuple):
    u: VertexId
    v: VertexId
    kind: EdgeKind
    layer: int


def opposite_boundaries(u: VertexId, v: VertexId) -> bool:
    """True iff ``u`` and ``v`` are boundary vertices on different sides."""
    return u.side is not None and v.side is not None and u.side != v.side


def same_boundary(u: VertexId, v: VertexId) -> bool:
    """True iff ``u`` and ``v`` are boundary vertices on the same side (any layer/row)."""
    return u.side is not None and u.side == v.side


class Lattice:
    """Per-layer pattern shared by every graph of distance ``d``.

    Local vertex numbering inside a layer: bulk ``(r, c)`` is ``r*(d-1)+c``,
    ``Left(r)`` is ``B+r`` and ``Right(r)`` is ``B+d+r`` with ``B = d*(d-1)``.

    Local edge numbering inside a layer: ``d*d`` SpaceH edges row by row, then
    ``(d-1)**2`` SpaceV edges, then (layers >= 2 only) ``d*(d-1)`` Time edges.
    """

    def __init__(self, d: int):
        self.d = d
        self.n_bulk = d * (d - 1)
        self.n_vertices = self.n_bulk + 2 * d
        self.n_h = d * d
        self.n_v = (d - 1) ** 2
        self.n_space = self.n_h + self.n_v
        self.n_time = self.n_bulk
        self.n_full = self.n_space + self.n_time

        u_loc, v_loc, u_dt, kinds = [], [], [], []

        def add(u, v, kind, dt=0):
            u_loc.append(u)
            v_loc.append(v)
            u_dt.append(dt)
            kinds.append(kind)

        w = d - 1
        for r in range(d):
            add(self.n_bulk + r, r * w, EdgeKind.SPACE_H)
            for c in range(d - 2):
                add(r * w + c, r * w + c + 1, EdgeKind.SPACE_H)
            add(r * w + d - 2, self.n_bulk + d + r, EdgeKind.SPACE_H)
        for r in range(d - 1):
            for c in range(w):
                add(r * w + c, (r + 1) * w + c, EdgeKind.SPACE_V)
        for b in range(self.n_bulk):
            add(b, b, EdgeKind.TIME, -1)

        # u endpoint of a Time edge sits one layer below the edge's layer
        self.u_local = np.array(u_loc, dtype=np.int64)
        self.v_local = np.array(v_loc, dtype=np.int64)
        self.u_dt = np.array(u_dt, dtype=np.int64)
        self.kind = np.array(kinds, dtype=np.int8)
        self.is_left_edge = np.zeros(self.n_full, dtype=bool)
        self.is_left_edge[np.arange(d) * d] = True
        self.is_right_edge = np.zeros(self.n_full, dtype=bool)
        self.is_right_edge[np.arange(d) * d + d - 1] = True

    def side_of_local(self, local: int) -> int:
        if local < self.n_bulk:
            return 0
        return Side.LEFT if local < self.n_bulk + self.d else Side.RIGHT


@lru_cache(maxsize=None)
def lattice(d: int) -> Lattice:
    return Lattice(d)


@dataclass(frozen=True)
class DecodingGraph:
    """Decoding graph of a distance-``d``, ``n``-round memory experiment.

    Immutable; every derived quantity is computed from ``(d, n)``.
    """

    d: int
    n: int
    lat: Lattice = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise TypeError("d must be an integer")
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"distance must be odd and >= 3, got {self.d}")
        if self.n < 1:
            raise ValueError(f"need at least one round, got n={self.n}")
        object.__setattr__(self, "lat", lattice(int(self.d)))

    # -- sizes ------------------------------------------------------------
    @property
    def num_layers(self) -> int:
        return self.n + 1

    @property
    def num_vertices(self) -> int:
        return self.num_layers * self.lat.n_vertices

    @property
    def num_edges(self) -> int:
        return self.layer_start(self.num_layers + 1)

    def layer_start(self, t: int) -> int:
        """Id of the first edge in layer ``t`` (``t = n+2`` gives ``num_edges``)."""
        lat = self.lat
        if t <= 1:
            return 0
        return lat.n_space + (t - 2) * lat.n_full

    def layer_starts(self, t: np.ndarray) -> np.ndarray:
        lat = self.lat
        t = np.asarray(t, dtype=np.int64)
        return np.where(t <= 1, 0, lat.n_space + (t - 2) * lat.n_full)

    # -- vertices ---------------------------------------------------------
    def vertex_index(self, v: VertexId) -> int:
        lat = self.lat
        if not 1 <= v.t <= self.num_layers or not 0 <= v.row < self.d:
            raise ValueError(f"vertex {v} outside the graph")
        if v.side is None:
            if v.col is None or not 0 <= v.col <= self.d - 2:
                raise ValueError(f"vertex {v} outside the graph")
            local = v.row * (self.d - 1) + v.col
        elif v.side == Side.LEFT:
            local = lat.n_bulk + v.row
        else:
            local = lat.n_bulk + self.d + v.row
        return (v.t - 1) * lat.n_vertices + local

    def vertex(self, i: int) -> VertexId:
        lat = self.lat
        if not 0 <= i < self.num_vertices:
            raise ValueError(f"vertex index {i} out of range")
        t, local = divmod(int(i), lat.n_vertices)
        t += 1
        if local < lat.n_bulk:
            r, c = divmod(local, self.d - 1)
            return bulk(t, r, c)
        local -= lat.n_bulk
        if local < self.d:
            return left(t, local)
        return right(t, local - self.d)

    def side(self, i: int) -> int:
        """0 for bulk, :attr:`Side.LEFT` or :attr:`Side.RIGHT` for boundary ids."""
        return self.lat.side_of_local(i % self.lat.n_vertices)

    def is_boundary(self, i: np.ndarray | int):
        return np.asarray(i) % self.lat.n_vertices >= self.lat.n_bulk

    def is_opposite(self, u: int, v: int) -> bool:
        su, sv = self.side(u), self.side(v)
        return su != 0 and sv != 0 and su != sv

    def is_same_boundary(self, u: int, v: int) -> bool:
        su = self.side(u)
        return su != 0 and su == self.side(v)

    @property
    def vertices(self) -> list[VertexId]:
        return [self.vertex(i) for i in range(self.num_vertices)]

    # -- edges ------------------------------------------------------------
    def edge_layers(self, ids: np.ndarray) -> np.ndarray:
        lat = self.lat
        ids = np.asarray(ids, dtype=np.int64)
        return np.where(ids < lat.n_space, 1, 2 + (ids - lat.n_space) // lat.n_full)

    def edge_arrays(self, ids: np.ndarray | None = None):
        """Vectorised ``(u, v, kind, layer)`` arrays for edge ids (all edges by default)."""
        lat = self.lat
        if ids is None:
            ids = np.arange(self.num_edges, dtype=np.int64)
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= self.num_edges):
            raise ValueError("edge id out of range")
        t = self.edge_layers(ids)
        j = ids - self.layer_starts(t)
        base = (t - 1) * lat.n_vertices
        u = base + lat.u_dt[j] * lat.n_vertices + lat.u_local[j]
        v = base + lat.v_local[j]
        return u, v, lat.kind[j], t

    def edge(self, e: int) -> Edge:
        u, v, k, t = self.edge_arrays(np.array([e]))
        return Edge(self.vertex(int(u[0])), self.vertex(int(v[0])), EdgeKind(int(k[0])), int(t[0]))

    def edge_index(self, a: VertexId, b: VertexId) -> int:
        """Id of the edge joining ``a`` and ``b`` (either order)."""
        ia, ib = self.vertex_index(a), self.vertex_index(b)
        t = max(a.t, b.t)
        lo, hi = self.layer_start(t), self.layer_start(t + 1)
        u, v, _, _ = self.edge_arrays(np.arange(lo, hi))
        hit = np.flatnonzero(((u == ia) & (v == ib)) | ((u == ib) & (v == ia)))
        if hit.size == 0:
            raise ValueError(f"no edge between {a} and {b}")
        return lo + int(hit[0])

    @cached_property
    def edges(self) -> list[Edge]:
        return [self.edge(e) for e in range(self.num_edges)]

    def edge_ids_in_layer(self, t: int) -> range:
        if not 1 <= t <= self.num_layers:
            raise ValueError(f"layer {t} outside 1..{self.num_layers}")
        return range(self.layer_start(t), self.layer_start(t + 1))

    def left_edge_mask(self, ids: np.ndarray) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        j = ids - self.layer_starts(self.edge_layers(ids))
        return self.lat.is_left_edge[j]

    def right_edge_mask(self, ids: np.ndarray) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        j = ids - self.layer_starts(self.edge_layers(ids))
        return self.lat.is_right_edge[j]

    def to_json(self) -> dict:
        u, v, k, t = self.edge_arrays()
        return {
            "d": self.d,
            "n": self.n,
            "vertices": [_vertex_json(self.vertex(i)) for i in range(self.num_vertices)],
            "edges": [
                {"u": int(a), "v": int(b), "kind": EdgeKind(int(c)).name, "layer": int(s)}
                for a, b, c, s in zip(u, v, k, t)
            ],
        }


def _vertex_json(v: VertexId) -> dict:
    if v.side is None:
        return {"kind": "bulk", "t": v.t, "row": v.row, "col": v.col}
    return {"kind": "boundary", "side": v.side.name.lower(), "t": v.t, "row": v.row}


def build_graph(d: int, n: int) -> DecodingGraph:
    return DecodingGraph(d, n)


def edges_in_layer(g: DecodingGraph, t: int) -> list[Edge]:
    """Edges assigned to layer ``t`` in construction order."""
    return [g.edge(e) for e in g.edge_ids_in_layer(t)]
