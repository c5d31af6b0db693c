"""Similarity and smoothness metrics for reproductions (lower is better).

* :func:`frechet` - discrete Frechet distance; spatial, not temporal.
* :func:`sse` - sum of squared pointwise errors; spatial and temporal.
* :func:`angular_similarity` - shape mismatch of segment directions in
  [0, 1]: 0 for parallel, 1 for antiparallel.
* :func:`jerk` - summed squared third differences; smoothness of one curve.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import resample
from .errors import DimensionError, SizeError
from .validation import check_trajectory


@dataclass(frozen=True)
class MetricsReport:
    """Reproduction-vs-demonstrations summary (means over the demos)."""

    frechet: float
    sse: float
    angular: float
    jerk: float

    def to_dict(self):
        return {"frechet": self.frechet, "sse": self.sse,
                "angular": self.angular, "jerk": self.jerk}


def _check_pair(a, b):
    a = check_trajectory(a, name="first trajectory", min_len=2)
    b = check_trajectory(b, name="second trajectory", min_len=2)
    if a.shape[1] != b.shape[1]:
        raise DimensionError(
            f"trajectories have dimensions {a.shape[1]} and {b.shape[1]}")
    return a, b


def frechet(a, b):
    """Discrete Frechet distance via the standard coupling recursion."""
    a, b = _check_pair(a, b)
    dist = cdist(a, b)
    p, q = dist.shape
    acc = np.empty((p, q))
    acc[0, 0] = dist[0, 0]
    for i in range(1, p):
        acc[i, 0] = max(acc[i - 1, 0], dist[i, 0])
    for j in range(1, q):
        acc[0, j] = max(acc[0, j - 1], dist[0, j])
    for i in range(1, p):
        for j in range(1, q):
            acc[i, j] = max(min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1]),
                            dist[i, j])
    return float(acc[-1, -1])


def _common_length(a, b):
    length = max(a.shape[0], b.shape[0])
    if a.shape[0] != length:
        a = resample(a, length)
    if b.shape[0] != length:
        b = resample(b, length)
    return a, b


def sse(repro, demo):
    """Sum of squared pointwise errors after index-linear resampling of the
    shorter curve to the longer one's length."""
    repro, demo = _check_pair(repro, demo)
    repro, demo = _common_length(repro, demo)
    return float(np.sum((repro - demo) ** 2))


def angular_similarity(repro, demo):
    """Mean segment-direction mismatch (1 - cos theta) / 2 in [0, 1].

    Both curves are resampled to the longer length first. A segment pair
    with exactly one zero-length segment scores 0.5; with both zero, 0.
    """
    repro, demo = _check_pair(repro, demo)
    repro, demo = _common_length(repro, demo)
    seg_a = np.diff(repro, axis=0)
    seg_b = np.diff(demo, axis=0)
    norm_a = np.linalg.norm(seg_a, axis=1)
    norm_b = np.linalg.norm(seg_b, axis=1)
    scores = np.empty(seg_a.shape[0])
    both_zero = (norm_a == 0) & (norm_b == 0)
    one_zero = ((norm_a == 0) | (norm_b == 0)) & ~both_zero
    ok = ~both_zero & ~one_zero
    cosine = np.zeros_like(scores)
    cosine[ok] = np.sum(seg_a[ok] * seg_b[ok], axis=1) / (norm_a[ok] * norm_b[ok])
    cosine = np.clip(cosine, -1.0, 1.0)
    scores[ok] = (1.0 - cosine[ok]) / 2.0
    scores[one_zero] = 0.5
    scores[both_zero] = 0.0
    return float(np.mean(scores))


def jerk(traj):
    """Summed squared third finite differences at unit index step."""
    traj = check_trajectory(traj, min_len=3)
    if traj.shape[0] < 4:
        raise SizeError(f"jerk needs at least 4 points, got {traj.shape[0]}")
    return float(np.sum(np.diff(traj, n=3, axis=0) ** 2))


def report(repro, demos):
    """Metrics of a reproduction against one or more demonstrations.

    ``frechet``/``sse``/``angular`` are means over the demos; ``jerk`` is
    the reproduction's own smoothness.
    """
    demo_list = list(demos.demos) if hasattr(demos, "demos") else list(demos)
    if not demo_list:
        raise SizeError("need at least one demonstration to report against")
    return MetricsReport(
        frechet=float(np.mean([frechet(repro, d) for d in demo_list])),
        sse=float(np.mean([sse(repro, d) for d in demo_list])),
        angular=float(np.mean([angular_similarity(repro, d) for d in demo_list])),
        jerk=jerk(repro),
    )
