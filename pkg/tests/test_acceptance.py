"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py``; the summary lines are printed
at the end of the session (see ``conftest.py``).
"""
import json
import os
import random

import numpy as np
import pytest

from anyonsweep.cli import main
from anyonsweep.estimate import (
    CheckpointRecord, fit_decay, intervals_overlap, left_boundary_count, wilson_interval,
)
from anyonsweep.graph import build_graph
from anyonsweep.harness import ExperimentConfig, memory_experiment, run_compare, run_new
from anyonsweep.noise import edge_set
from anyonsweep.sweep import SweepState, layered_edges, sweep_layer
from oracles import path_decomposition_crossings, random_single_component

RESULTS: list[tuple[int, bool, str]] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS.append((criterion, ok, detail))
    assert ok, f"criterion {criterion}: {detail}"


GRID = [(3, 0.005), (3, 0.02), (5, 0.005), (5, 0.02)]
SHOTS = 10_000


@pytest.fixture(scope="module")
def decoded_shots():
    stats = {}
    for d, p in GRID:
        parity_ok = clean = 0
        for shot in range(SHOTS):
            g, res = memory_experiment(d, 4 * d, p, p, seed=0, shot=shot)
            state = SweepState()
            for t, edges in enumerate(layered_edges(g, res), 1):
                sweep_layer(state, t, edges, g.is_opposite, g.is_same_boundary)
            clean += len(state.pairs) == 0
            parity_ok += state.l % 2 == left_boundary_count(g, res) % 2
        stats[d, p] = (parity_ok, clean)
    return stats


def test_c1_parity_theorem(decoded_shots):
    worst = min(v[0] for v in decoded_shots.values())
    record(1, worst == SHOTS, f"parity l = l' in {worst}/{SHOTS} shots (worst (d,p) cell)")


def test_c2_clean_termination(decoded_shots):
    worst = min(v[1] for v in decoded_shots.values())
    record(2, worst == SHOTS, f"no anyon pairs left in {worst}/{SHOTS} shots (worst cell)")


def test_c3_single_component_oracle():
    rng = random.Random(3)
    agree = total = 0
    for i in range(1000):
        g = build_graph(3, 1 + i % 10)
        ids = random_single_component(g, rng)
        state = SweepState()
        for t, edges in enumerate(layered_edges(g, edge_set(g, ids)), 1):
            sweep_layer(state, t, edges, g.is_opposite, g.is_same_boundary)
        agree += state.l == path_decomposition_crossings(g, ids) and len(state.pairs) == 0
        total += 1
    record(3, agree == total, f"sweep matches path decomposition on {agree}/{total} components")


def test_c4_cross_method_agreement():
    cfg = ExperimentConfig(method="compare", distances=[3], noise=[0.01], shots=10_000,
                           checkpoints=10, rounds_mult=100_000, seed=0,
                           workers=os.cpu_count() or 1)
    (row,) = run_compare(cfg)
    new, old = row["new"], row["legacy"]
    detail = (f"new {new['f_hat']:.5f} [{new['lo']:.5f}, {new['hi']:.5f}] vs "
              f"legacy {old['f_hat']:.5f} [{old['lo']:.5f}, {old['hi']:.5f}]")
    record(4, bool(row["agree"]), detail)


def test_c5_duration_sufficiency():
    short = run_new(ExperimentConfig(distances=[3], noise=[0.01], rounds_mult=100, seed=101, workers=1))[0]
    long = run_new(ExperimentConfig(distances=[3], noise=[0.01], rounds_mult=1000, seed=202, workers=1))[0]
    ok = intervals_overlap((short.lo, short.hi), (long.lo, long.hi))
    record(5, ok, f"m=100 [{short.lo:.4f}, {short.hi:.4f}] vs m=1000 [{long.lo:.4f}, {long.hi:.4f}]")


def test_c6_threshold_ordering():
    # coarse scan puts the d=3/d=5 crossing between p=0.02 and p=0.03
    above = run_new(ExperimentConfig(distances=[3, 5], noise=[0.04], rounds_mult=2000, workers=1))
    below = run_new(ExperimentConfig(distances=[3, 5], noise=[0.005], rounds_mult=20_000, workers=1))
    a3, a5 = above
    b3, b5 = below
    ok = a5.f_hat > a3.f_hat and a5.lo > a3.hi and b5.f_hat < b3.f_hat and b5.hi < b3.lo
    detail = (f"p=0.04: f3={a3.f_hat:.4f} f5={a5.f_hat:.4f}; "
              f"p=0.005: f3={b3.f_hat:.5f} f5={b5.f_hat:.5f}")
    record(6, ok, detail)


def test_c7_wilson_coverage():
    rng = np.random.default_rng(7)
    ks = rng.binomial(100, 0.1, size=10_000)
    cover = np.mean([lo <= 0.1 <= hi for lo, hi in (wilson_interval(int(k), 100) for k in ks)])
    record(7, 0.93 <= cover <= 0.97, f"coverage {cover:.4f}")


def test_c8_fit_exactness():
    d, alpha, phi = 3, 0.98, 1e-3
    records = [CheckpointRecord(k * d, (1 - alpha * (1 - 2 * phi) ** (k * d)) / 2, 1)
               for k in range(1, 11)]
    expected = -np.expm1(d * np.log1p(-2 * phi)) / 2
    rel = abs(fit_decay(records, d).f_d - expected) / expected
    record(8, rel < 1e-9, f"relative error {rel:.2e}")


def _strip(path):
    rows = [json.loads(line) for line in open(path)]
    for r in rows:
        r.pop("wall_time")
    return rows


def test_c9_determinism_across_workers(tmp_path):
    outputs = {}
    for cmd, extra in (("run", ["--rounds-mult", "300"]), ("run-legacy", ["--shots", "450"])):
        for workers in (1, 3):
            out = tmp_path / f"{cmd}-{workers}.jsonl"
            code = main([cmd, "--distance", "3,5", "--noise", "0.01,0.03", "--seed", "9",
                         "--workers", str(workers), "--out", str(out), *extra])
            assert code == 0
            outputs[cmd, workers] = _strip(out)
    ok = all(outputs[c, 1] == outputs[c, 3] for c in ("run", "run-legacy"))
    record(9, ok, "identical JSONL (minus wall_time) for --workers 1 and 3")
