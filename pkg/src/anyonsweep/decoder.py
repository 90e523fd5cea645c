"""Union-Find decoder, batch and sliding-window ("forward") modes.

Decoding happens on a window of consecutive layers. A window's local graph
depends only on ``(d, number of layers, has temporary top boundary)`` so it
is built once and reused for every window position.

Cluster growth follows Delfosse-Nickerson: every odd cluster not touching a
boundary grows by half an edge per round, clusters merge when an edge becomes
fully grown, and a spanning forest of the grown edges is peeled to obtain the
correction. Every boundary vertex (Left, Right and the temporary window face)
is collapsed into one root when peeling.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graph import DecodingGraph, lattice

_BOUNDARY = -1


class WindowGraph:
    """Local graph of ``num_layers`` consecutive layers.

    Time edges entering the bottom layer are excluded (they belong to the
    previous window's commit). With ``temp_boundary`` every bulk vertex of
    the top layer gets an extra edge to a virtual boundary vertex.
    """

    def __init__(self, d: int, num_layers: int, temp_boundary: bool):
        lat = lattice(d)
        nv = lat.n_vertices
        self.d = d
        self.num_layers = num_layers
        self.num_real = num_layers * nv
        n_virtual = lat.n_bulk if temp_boundary else 0
        self.num_vertices = self.num_real + n_virtual
        self.is_boundary = [False] * self.num_vertices
        for o in range(num_layers):
            for b in range(lat.n_bulk, nv):
                self.is_boundary[o * nv + b] = True
        for i in range(self.num_real, self.num_vertices):
            self.is_boundary[i] = True

        eo, ej, eu, ev, elow = [], [], [], [], []
        for o in range(num_layers):
            count = lat.n_space if o == 0 else lat.n_full
            j = np.arange(count)
            eo.append(np.full(count, o))
            ej.append(j)
            eu.append((o + lat.u_dt[j]) * nv + lat.u_local[j])
            ev.append(o * nv + lat.v_local[j])
            elow.append(o + lat.u_dt[j])
        if temp_boundary:
            top = num_layers - 1
            b = np.arange(lat.n_bulk)
            eo.append(np.full(lat.n_bulk, top))
            ej.append(np.full(lat.n_bulk, -1))
            eu.append(top * nv + b)
            ev.append(self.num_real + b)
            elow.append(np.full(lat.n_bulk, top))
        self.edge_offset = np.concatenate(eo)
        self.edge_j = np.concatenate(ej)
        self.edge_u = np.concatenate(eu)
        self.edge_v = np.concatenate(ev)
        self.edge_low = np.concatenate(elow)
        self.edge_real = self.edge_j >= 0

        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for e, (u, v) in enumerate(zip(self.edge_u.tolist(), self.edge_v.tolist())):
            adj[u].append((e, v))
            adj[v].append((e, u))
        self.adj = adj


@lru_cache(maxsize=64)
def window_graph(d: int, num_layers: int, temp_boundary: bool) -> WindowGraph:
    return WindowGraph(d, num_layers, temp_boundary)


def uf_local(wg: WindowGraph, defects: list[int]) -> list[int]:
    """Union-Find decode on a window graph; returns local edge ids of the correction."""
    if not defects:
        return []
    adj = wg.adj
    is_bdy = wg.is_boundary
    parent: dict[int, int] = {}
    size: dict[int, int] = {}
    odd: dict[int, bool] = {}
    touches: dict[int, bool] = {}
    frontier: dict[int, list[int]] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def new_cluster(x: int, is_defect: bool) -> None:
        parent[x] = x
        size[x] = 1
        odd[x] = is_defect
        touches[x] = is_bdy[x]
        frontier[x] = [x]

    for x in defects:
        new_cluster(x, True)

    support: dict[int, int] = {}
    grown: list[tuple[int, int, int]] = []
    active = sorted(defects)
    while active:
        fused = []
        for root in active:
            keep = []
            for x in frontier[root]:
                open_edges = False
                for e, y in adj[x]:
                    s = support.get(e, 0)
                    if s >= 2:
                        continue
                    s += 1
                    support[e] = s
                    if s == 2:
                        fused.append((e, x, y))
                    else:
                        open_edges = True
                if open_edges:
                    keep.append(x)
            frontier[root] = keep
        for e, x, y in fused:
            grown.append((e, x, y))
            for z in (x, y):
                if z not in parent:
                    new_cluster(z, False)
            a, b = find(x), find(y)
            if a == b:
                continue
            if (size[a], -a) < (size[b], -b):
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            odd[a] ^= odd[b]
            touches[a] = touches[a] or touches[b]
            frontier[a].extend(frontier.pop(b))
        roots = {find(r) for r in active}
        active = sorted(r for r in roots if odd[r] and not touches[r])

    return _peel(grown, defects, is_bdy)


def _peel(grown, defects, is_bdy) -> list[int]:
    tree: dict[int, list[tuple[int, int]]] = {}
    for e, x, y in grown:
        a = _BOUNDARY if is_bdy[x] else x
        b = _BOUNDARY if is_bdy[y] else y
        if a == b:
            continue
        tree.setdefault(a, []).append((e, b))
        tree.setdefault(b, []).append((e, a))

    order: list[int] = []
    up: dict[int, tuple[int, int]] = {}
    seen: set[int] = set()
    starts = ([_BOUNDARY] if _BOUNDARY in tree else []) + sorted(defects)
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            order.append(x)
            for e, y in tree.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    up[y] = (e, x)
                    queue.append(y)

    parity = dict.fromkeys(defects, True)
    correction = []
    for x in reversed(order):
        if x not in up or not parity.get(x, False):
            continue
        e, p = up[x]
        correction.append(e)
        parity[p] = not parity.get(p, False)
    return correction


def _as_mask(g: DecodingGraph, syndrome) -> np.ndarray:
    s = np.asarray(syndrome)
    if s.dtype == bool and s.shape == (g.num_vertices,):
        mask = s.copy()
    else:
        mask = np.zeros(g.num_vertices, dtype=bool)
        mask[s.astype(np.int64)] = True
    if np.any(mask.reshape(g.num_layers, -1)[:, g.lat.n_bulk:]):
        raise ValueError("syndrome contains boundary vertices")
    return mask


def _global_edges(g: DecodingGraph, wg: WindowGraph, start: int, local: np.ndarray) -> np.ndarray:
    return g.layer_starts(start + wg.edge_offset[local]) + wg.edge_j[local]


def uf_decode(g: DecodingGraph, syndrome) -> np.ndarray:
    """Batch Union-Find decode of the whole graph; returns a correction edge mask."""
    mask = _as_mask(g, syndrome)
    wg = window_graph(g.d, g.num_layers, False)
    local = np.array(uf_local(wg, np.flatnonzero(mask).tolist()), dtype=np.int64)
    correction = np.zeros(g.num_edges, dtype=bool)
    correction[_global_edges(g, wg, 1, local)] = True
    return correction


def default_window(d: int) -> tuple[int, int]:
    return 2 * d, d


def forward_decode(g: DecodingGraph, syndrome, window: int | None = None,
                   commit: int | None = None) -> np.ndarray:
    """Sliding-window Union-Find decode.

    Each window of ``window`` layers is decoded with a temporary boundary on
    its top face. Correction edges whose lower endpoint lies in the oldest
    ``commit`` layers are applied; everything else (including matches to
    the temporary face) is left as defects for the next window, which starts
    right above the committed layers. The last window reaches layer ``n+1``
    and is decoded completely.
    """
    dw, dc = default_window(g.d)
    window = dw if window is None else window
    commit = dc if commit is None else commit
    if not 1 <= commit < window:
        raise ValueError(f"need 1 <= commit < window, got W={window}, C={commit}")
    mask = _as_mask(g, syndrome)
    nv = g.lat.n_vertices
    correction = np.zeros(g.num_edges, dtype=bool)
    a = 1
    while True:
        last = a + window - 1 >= g.num_layers
        num_layers = g.num_layers - a + 1 if last else window
        lo = (a - 1) * nv
        defects = np.flatnonzero(mask[lo:lo + num_layers * nv])
        if defects.size:
            wg = window_graph(g.d, num_layers, not last)
            local = np.array(uf_local(wg, defects.tolist()), dtype=np.int64)
            if not last:
                local = local[wg.edge_low[local] < commit]
                # toggle endpoints of committed edges in the working syndrome
                ends = np.concatenate([wg.edge_u[local], wg.edge_v[local]])
                ends = ends[ends % nv < g.lat.n_bulk]
                np.bitwise_xor.at(mask, lo + ends, True)
            correction[_global_edges(g, wg, a, local)] ^= True
        if last:
            break
        a += commit
    return correction


def residual(flips: np.ndarray, correction: np.ndarray) -> np.ndarray:
    return np.logical_xor(flips, correction)
