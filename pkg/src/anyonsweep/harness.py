"""Experiment orchestration for both estimation methods.

Work is split into tasks whose content does not depend on the worker count
(one task per ``(d, p)`` for the streaming method, fixed-size shot chunks for
the parity method). Results are merged in task order, so outputs are
identical for any ``workers`` value.
"""
from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .decoder import default_window, forward_decode, residual, uf_decode
from .estimate import (
    CheckpointRecord, checkpoint_covariance, estimate_new, fit_decay, intervals_overlap,
    parity_failure,
)
from .graph import DecodingGraph
from .noise import NoiseParams, sample_noise, syndrome_mask
from .sweep import count_logical_bitflips

log = logging.getLogger(__name__)

METHODS = ("new", "legacy", "compare")
DECODERS = ("uf", "uf-forward")
CHUNK_SHOTS = 200


@dataclass
class ExperimentConfig:
    method: str = "new"
    distances: list[int] = field(default_factory=lambda: [3])
    noise: list[float] = field(default_factory=lambda: [0.01])
    meas_noise: float | None = None
    rounds_mult: int = 100
    shots: int = 10_000
    checkpoints: int = 10
    seed: int = 0
    decoder: str = "uf-forward"
    window: int | None = None
    commit: int | None = None
    z: float = 1.96
    fmt: str = "jsonl"
    out: str | None = None
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if not self.distances or not self.noise:
            raise ValueError("distance and noise lists must be non-empty")
        for d in self.distances:
            if d < 3 or d % 2 == 0:
                raise ValueError(f"distance must be odd and >= 3, got {d}")
        for p in self.noise + ([self.meas_noise] if self.meas_noise is not None else []):
            if not 0 <= p < 1:
                raise ValueError(f"noise level {p} outside [0, 1)")
        if self.rounds_mult < 1 or self.shots < 1 or self.checkpoints < 2:
            raise ValueError("rounds_mult and shots must be >= 1, checkpoints >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.fmt not in ("jsonl", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.z <= 0:
            raise ValueError("z must be positive")
        for d in self.distances:
            window, commit = self.window_for(d)
            if not 1 <= commit < window:
                raise ValueError(f"need 1 <= commit < window, got W={window}, C={commit}")

    def window_for(self, d: int) -> tuple[int, int]:
        w, c = default_window(d)
        return (self.window or w, self.commit or c)

    def q_for(self, p: float) -> float:
        return p if self.meas_noise is None else self.meas_noise


@dataclass
class ResultRecord:
    method: str
    d: int
    p: float
    q: float
    seed: int
    decoder: str
    window: int
    commit: int
    z: float
    n: int | None = None
    l: int | None = None
    shots: int | None = None
    checkpoints: list[dict] | None = None
    f_hat: float | None = None
    lo: float | None = None
    hi: float | None = None
    gradient: float | None = None
    intercept: float | None = None
    excluded: list[int] | None = None
    error: str | None = None
    wall_time: float = 0.0


RECORD_FIELDS = [f.name for f in fields(ResultRecord)]


def decode(g: DecodingGraph, syndrome, decoder: str, window: int, commit: int) -> np.ndarray:
    if decoder == "uf":
        return uf_decode(g, syndrome)
    return forward_decode(g, syndrome, window, commit)


def _pool_map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def memory_experiment(d: int, n: int, p: float, q: float, seed: int, shot: int = 0,
                      decoder: str = "uf-forward", window: int | None = None,
                      commit: int | None = None) -> tuple[DecodingGraph, np.ndarray]:
    """Sample, decode and return ``(graph, residual)`` for one experiment."""
    g = DecodingGraph(d, n)
    w, c = default_window(d)
    flips = sample_noise(g, NoiseParams(p, q, seed, shot))
    correction = decode(g, syndrome_mask(g, flips), decoder, window or w, commit or c)
    return g, residual(flips, correction)


def _new_task(args) -> ResultRecord:
    cfg, d, p = args
    q = cfg.q_for(p)
    window, commit = cfg.window_for(d)
    n = cfg.rounds_mult * d
    start = time.perf_counter()
    g, res = memory_experiment(d, n, p, q, cfg.seed, 0, cfg.decoder, window, commit)
    l = count_logical_bitflips(g, res)
    est = estimate_new(l, n, d, cfg.z)
    return ResultRecord(
        "new", d, p, q, cfg.seed, cfg.decoder, window, commit, cfg.z,
        n=n, l=l, f_hat=est.f_hat, lo=est.lo, hi=est.hi,
        wall_time=time.perf_counter() - start,
    )


def run_new(cfg: ExperimentConfig) -> list[ResultRecord]:
    tasks = [(cfg, d, p) for d in cfg.distances for p in cfg.noise]
    records = _pool_map(_new_task, tasks, cfg.workers)
    for r in records:
        log.info("new d=%d p=%g: l=%d f_hat=%.5g [%.5g, %.5g]", r.d, r.p, r.l, r.f_hat, r.lo, r.hi)
    return records


def legacy_failures(d: int, p: float, q: float, seed: int, shots: range, checkpoints: int,
                    decoder: str = "uf-forward", window: int | None = None,
                    commit: int | None = None) -> np.ndarray:
    """Joint odd-parity counts over checkpoints n = d, 2d, ..., checkpoints*d.

    Entry ``[i, j]`` counts shots failing at both checkpoints ``i`` and ``j``;
    the diagonal is the per-checkpoint failure count.

    Each shot samples the longest experiment once; every checkpoint reuses
    the prefix of that noise (the first ``k*d`` rounds plus their readout
    layer) and is decoded on its own.
    """
    w, c = default_window(d)
    window, commit = window or w, commit or c
    longest = DecodingGraph(d, checkpoints * d)
    prefixes = [DecodingGraph(d, k * d) for k in range(1, checkpoints + 1)]
    joint = np.zeros((checkpoints, checkpoints), dtype=np.int64)
    fails = np.zeros(checkpoints, dtype=np.int64)
    for shot in shots:
        flips = sample_noise(longest, NoiseParams(p, q, seed, shot))
        fails[:] = 0
        for i, g in enumerate(prefixes):
            f = flips[:g.num_edges]
            if not f.any():
                continue
            correction = decode(g, syndrome_mask(g, f), decoder, window, commit)
            fails[i] = parity_failure(g, residual(f, correction))
        if fails.any():
            joint += np.outer(fails, fails)
    return joint


def _legacy_chunk(args):
    cfg, d, p, lo, hi = args
    window, commit = cfg.window_for(d)
    start = time.perf_counter()
    # legacy shots are numbered from 1; shot 0 is the streaming experiment
    joint = legacy_failures(d, p, cfg.q_for(p), cfg.seed, range(lo + 1, hi + 1),
                             cfg.checkpoints, cfg.decoder, window, commit)
    return joint, time.perf_counter() - start


def run_legacy(cfg: ExperimentConfig) -> list[ResultRecord]:
    pairs = [(d, p) for d in cfg.distances for p in cfg.noise]
    tasks = [
        (cfg, d, p, lo, min(lo + CHUNK_SHOTS, cfg.shots))
        for d, p in pairs
        for lo in range(0, cfg.shots, CHUNK_SHOTS)
    ]
    results = _pool_map(_legacy_chunk, tasks, cfg.workers)
    per_pair = len(results) // len(pairs)
    records = []
    for i, (d, p) in enumerate(pairs):
        chunk = results[i * per_pair:(i + 1) * per_pair]
        joint = np.sum([c for c, _ in chunk], axis=0)
        window, commit = cfg.window_for(d)
        checkpoints = [
            CheckpointRecord((k + 1) * d, int(joint[k, k]), cfg.shots)
            for k in range(cfg.checkpoints)
        ]
        rec = ResultRecord(
            "legacy", d, p, cfg.q_for(p), cfg.seed, cfg.decoder, window, commit, cfg.z,
            shots=cfg.shots, checkpoints=[asdict(c) for c in checkpoints],
            wall_time=sum(t for _, t in chunk),
        )
        try:
            fit = fit_decay(checkpoints, d, cfg.z, checkpoint_covariance(joint, cfg.shots))
        except ValueError as exc:
            rec.error = str(exc)
            log.warning("legacy d=%d p=%g: %s", d, p, exc)
        else:
            rec.f_hat, rec.lo, rec.hi = fit.f_d, fit.lo, fit.hi
            rec.gradient, rec.intercept, rec.excluded = fit.gradient, fit.intercept, fit.excluded
            log.info("legacy d=%d p=%g: f_d=%.5g [%.5g, %.5g]", d, p, fit.f_d, fit.lo, fit.hi)
        records.append(rec)
    return records


def run_compare(cfg: ExperimentConfig) -> list[dict]:
    new = run_new(cfg)
    legacy = run_legacy(cfg)
    report = []
    for a, b in zip(new, legacy):
        agree = None
        if b.error is None:
            agree = intervals_overlap((a.lo, a.hi), (b.lo, b.hi))
        report.append({
            "d": a.d, "p": a.p, "q": a.q, "agree": agree,
            "new": asdict(a), "legacy": asdict(b),
            "wall_time_new": a.wall_time, "wall_time_legacy": b.wall_time,
        })
    return report


def strip_wall_time(obj):
    """Copy of a record/report with every ``wall_time*`` key removed."""
    if isinstance(obj, dict):
        return {k: strip_wall_time(v) for k, v in obj.items() if not k.startswith("wall_time")}
    if isinstance(obj, list):
        return [strip_wall_time(v) for v in obj]
    return obj
