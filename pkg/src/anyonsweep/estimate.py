"""Logical error rate estimators.

Two routes to the rate per ``d`` rounds:

* streaming count: ``l`` bitflips in ``n`` rounds gives ``l*d/n``, with a
  Wilson interval over ``n/d`` blocks of ``d`` rounds;
* multi-duration parity: per-checkpoint failure fractions ``k/s`` are fitted
  to ``1 - 2 f_n = alpha (1 - 2 f(1))**n`` by a straight line of
  ``log2(1 - 2 k/s)`` against ``n/d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import DecodingGraph

Z95 = 1.96


def wilson_interval(k: int, s: int, z: float = Z95) -> tuple[float, float]:
    if s <= 0:
        raise ValueError("need at least one trial")
    if not 0 <= k <= s:
        raise ValueError(f"successes {k} outside 0..{s}")
    if z <= 0:
        raise ValueError("z must be positive")
    z2 = z * z
    denom = 1 + z2 / s
    center = (k / s + z2 / (2 * s)) / denom
    half = z * math.sqrt(k * (s - k) / s**3 + z2 / (4 * s * s)) / denom
    lo, hi = center - half, center + half
    # exact endpoints at k = 0 and k = s, where rounding can leave 1e-17 residue
    if k == 0:
        lo = 0.0
    if k == s:
        hi = 1.0
    return max(0.0, lo), min(1.0, hi)


@dataclass(frozen=True)
class RateEstimate:
    f_hat: float
    lo: float
    hi: float
    k: int
    s: int


def estimate_new(l: int, n: int, d: int, z: float = Z95) -> RateEstimate:
    """Rate per ``d`` rounds from ``l`` logical bitflips counted over ``n`` rounds."""
    if n <= 0 or n % d:
        raise ValueError(f"rounds n={n} must be a positive multiple of d={d}")
    blocks = n // d
    if not 0 <= l <= blocks:
        raise ValueError(f"count l={l} exceeds the {blocks} blocks of d rounds")
    lo, hi = wilson_interval(l, blocks, z)
    return RateEstimate(l * d / n, lo, hi, l, blocks)


def left_boundary_count(g: DecodingGraph, residual: np.ndarray) -> int:
    return int(np.count_nonzero(g.left_edge_mask(np.flatnonzero(residual))))


def parity_failure(g: DecodingGraph, residual: np.ndarray) -> int:
    """Parity of the number of residual edges touching the Left boundary."""
    return left_boundary_count(g, residual) & 1


@dataclass(frozen=True)
class CheckpointRecord:
    n: int
    k: float
    s: int

    def __post_init__(self):
        if self.s <= 0 or not 0 <= self.k <= self.s:
            raise ValueError(f"bad checkpoint counts k={self.k}, s={self.s}")

    @property
    def fraction(self) -> float:
        return self.k / self.s


@dataclass(frozen=True)
class FitResult:
    gradient: float
    intercept: float
    f_d: float
    used: list[int]
    excluded: list[int] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    lo: float | None = None
    hi: float | None = None


def rate_from_gradient(g: float) -> float:
    """``(1 - 2**g) / 2`` without cancellation for small ``|g|``."""
    return -math.expm1(g * math.log(2.0)) / 2


def _line(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    gradient = float(np.sum((x - xm) * (y - ym))) / sxx
    return gradient, float(ym - gradient * xm)


def fit_decay(records: list[CheckpointRecord], d: int, z: float | None = None,
              cov: np.ndarray | None = None) -> FitResult:
    """Least-squares line through ``(n/d, log2(1 - 2 k/s))``.

    Records with ``k/s >= 1/2`` have no logarithm and are listed in
    ``excluded``. With ``z`` given, ``lo``/``hi`` come from the delta-method
    standard error of the gradient. ``cov`` is the covariance matrix of the
    checkpoint fractions (same order as ``records``); checkpoints cut from
    the same shots are correlated, so callers that have the joint counts
    should pass it. Without it the checkpoints are treated as independent
    binomials.
    """
    keep = [i for i, r in enumerate(records) if r.fraction < 0.5]
    usable = [records[i] for i in keep]
    excluded = [r.n for r in records if r.fraction >= 0.5]
    if len({r.n for r in usable}) < 2:
        raise ValueError(f"need two usable checkpoints, have {len(usable)} (excluded n={excluded})")
    x = np.array([r.n / d for r in usable])
    f = np.array([r.fraction for r in usable])
    y = np.log2(1 - 2 * f)
    gradient, intercept = _line(x, y)
    f_d = rate_from_gradient(gradient)
    res = (y - (gradient * x + intercept)).tolist()

    lo = hi = None
    if z is not None:
        if cov is None:
            c = np.diag(f * (1 - f) / np.array([r.s for r in usable]))
        else:
            c = np.asarray(cov, dtype=float)[np.ix_(keep, keep)]
        w = (x - x.mean()) / np.sum((x - x.mean()) ** 2)
        jw = w * (-2 / ((1 - 2 * f) * math.log(2)))
        sd = math.sqrt(max(0.0, float(jw @ c @ jw)))
        lo = max(0.0, rate_from_gradient(gradient + z * sd))
        hi = min(0.5, rate_from_gradient(gradient - z * sd))
    return FitResult(gradient, intercept, f_d, [r.n for r in usable], excluded, res, lo, hi)


def checkpoint_covariance(joint: np.ndarray, s: int) -> np.ndarray:
    """Covariance of checkpoint failure fractions from joint failure counts.

    ``joint[i, j]`` is the number of shots failing at both checkpoints ``i``
    and ``j`` (so the diagonal holds the per-checkpoint counts).
    """
    joint = np.asarray(joint, dtype=float)
    f = np.diag(joint) / s
    return (joint / s - np.outer(f, f)) / s


def intervals_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]
