"""Demonstration ingest, resampling, alignment and concatenation.

A demonstration is a (T, d) array of workspace points with uniform time
indexing. ``build_set`` aligns N demonstrations to a common length by
index-linear interpolation and stacks them, together with their tangent
and laplacian images, into concatenated data matrices used by the fit.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coordinates import transform
from .errors import FormatError, SizeError
from .validation import check_demos

SYNTH_SHAPES = ("line", "arc", "s-curve")


@dataclass(frozen=True)
class DemonstrationSet:
    """N time-aligned demonstrations plus their concatenated data matrices.

    Attributes
    ----------
    demos : tuple of ndarray
        N trajectories, each of shape (length, n_dims).
    g, g_t, g_l : ndarray
        Concatenated Cartesian / tangent / laplacian data, each of shape
        (N * length, n_dims). Transforms are applied per demonstration
        before concatenation, never across demo boundaries.
    """

    demos: tuple
    g: np.ndarray = field(repr=False)
    g_t: np.ndarray = field(repr=False)
    g_l: np.ndarray = field(repr=False)

    @property
    def n_demos(self):
        return len(self.demos)

    @property
    def length(self):
        return self.demos[0].shape[0]

    @property
    def n_dims(self):
        return self.demos[0].shape[1]

    def demo_slice(self, i):
        """Row slice of ``g``/``g_t``/``g_l`` belonging to demo ``i``."""
        return slice(i * self.length, (i + 1) * self.length)

    def mean_demo(self):
        """Pointwise mean of the aligned demonstrations, shape (length, d)."""
        return np.mean(np.stack(self.demos), axis=0)


def resample(points, length):
    """Index-linear resampling of a trajectory to ``length`` samples.

    First and last points are preserved exactly.
    """
    points = np.asarray(points, dtype=float)
    if length < 3:
        raise SizeError(f"resample target length must be >= 3, got {length}")
    src = np.arange(points.shape[0], dtype=float)
    dst = np.linspace(0.0, points.shape[0] - 1.0, int(length))
    return np.column_stack(
        [np.interp(dst, src, points[:, k]) for k in range(points.shape[1])])


def build_set(demos, target_length=None):
    """Align demonstrations to a common length and assemble a set.

    Parameters
    ----------
    demos : sequence of array-like
        Trajectories of possibly different lengths sharing one dimension.
    target_length : int, optional
        Common length after resampling; defaults to the longest demo.
    """
    demos = check_demos(demos)
    if target_length is None:
        target_length = max(d.shape[0] for d in demos)
    aligned = tuple(
        d if d.shape[0] == target_length else resample(d, target_length)
        for d in demos)
    g = np.concatenate(aligned, axis=0)
    g_t = np.concatenate([transform(d, "tangent") for d in aligned], axis=0)
    g_l = np.concatenate([transform(d, "laplacian") for d in aligned], axis=0)
    return DemonstrationSet(demos=aligned, g=g, g_t=g_t, g_l=g_l)


def _parse_float(token, where):
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"{where}: could not parse {token!r} as a number") from None
    if math.isnan(value) or math.isinf(value):
        raise FormatError(f"{where}: non-finite value {token!r} rejected")
    return value


def _parse_csv(text, origin):
    demos, current = [], []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            if current:
                demos.append(np.array(current))
                current, width = [], None
            continue
        fields = [f for f in line.split(",")]
        row = [_parse_float(f.strip(), f"{origin}, line {lineno}") for f in fields]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FormatError(
                f"{origin}, line {lineno}: expected {width} fields, got {len(row)}")
        current.append(row)
    if current:
        demos.append(np.array(current))
    if not demos:
        raise FormatError(f"{origin}: no data rows found")
    return demos


def _reject_constant(token):
    raise FormatError(f"non-finite JSON constant {token!r} rejected")


def _parse_json(text, origin):
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{origin}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict) or "demos" not in doc:
        raise FormatError(f"{origin}: expected an object with a 'demos' key")
    demos = []
    for i, demo in enumerate(doc["demos"]):
        try:
            arr = np.array(demo, dtype=float)
        except (TypeError, ValueError):
            raise FormatError(f"{origin}: demo {i} is not a rectangular point list") from None
        if arr.ndim != 2:
            raise FormatError(f"{origin}: demo {i} is not a list of points")
        if not np.all(np.isfinite(arr)):
            raise FormatError(f"{origin}: demo {i} contains non-finite values")
        demos.append(arr)
    if not demos:
        raise FormatError(f"{origin}: 'demos' is empty")
    return demos


def load_demonstrations(source, fmt=None):
    """Load demonstrations from a file, a list of files, or in-memory data.

    Parameters
    ----------
    source : path, sequence of paths, or array-like
        CSV files hold one point per row with comma-separated fields and
        demos separated by blank lines (or one file per demo). JSON files
        hold ``{"demos": [[[x, y, ...], ...], ...]}``. Array-like input is
        treated as one demo (2-D) or a list of demos.
    fmt : {"csv", "json"}, optional
        Required when the file extension is ambiguous.

    Returns
    -------
    list of ndarray
        Demonstrations in their original sampling (no resampling).
    """
    if isinstance(source, (str, Path)):
        paths = [Path(source)]
    elif isinstance(source, (list, tuple)) and source and all(
            isinstance(p, (str, Path)) for p in source):
        paths = [Path(p) for p in source]
    else:
        arr_or_list = source
        if isinstance(arr_or_list, np.ndarray) and arr_or_list.ndim == 2:
            arr_or_list = [arr_or_list]
        return check_demos(list(arr_or_list))

    demos = []
    for path in paths:
        if not path.exists():
            raise FormatError(f"input file not found: {path}")
        text = path.read_text()
        tag = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
        if tag == "csv":
            demos.extend(_parse_csv(text, str(path)))
        elif tag == "json":
            demos.extend(_parse_json(text, str(path)))
        else:
            raise FormatError(f"unknown format tag {tag!r}; expected 'csv' or 'json'")
    return check_demos(demos)


def _base_curve(shape, n_samples):
    t = np.linspace(0.0, 1.0, n_samples)
    if shape == "line":
        return np.column_stack([t, t])
    if shape == "arc":
        return np.column_stack([np.cos(np.pi * t), np.sin(np.pi * t)])
    if shape == "s-curve":
        return np.column_stack([t, 1.0 / (1.0 + np.exp(-10.0 * (t - 0.5)))])
    raise ValueError(f"unknown synthetic shape {shape!r}; expected one of {SYNTH_SHAPES}")


def synth_demos(shape, n_demos, noise_sd, seed, n_samples=100, offset_sd=0.0):
    """Generate synthetic 2-D demonstrations of a named shape.

    Deterministic under a fixed seed. ``noise_sd`` adds i.i.d. Gaussian
    noise per point; ``offset_sd`` additionally translates each demo by a
    constant Gaussian offset, producing sets that share shape but differ
    in position. With both at zero all demos are identical copies of the
    base curve.
    """
    if n_demos < 1:
        raise SizeError(f"need n_demos >= 1, got {n_demos}")
    if noise_sd < 0 or offset_sd < 0:
        raise ValueError("noise_sd and offset_sd must be >= 0")
    base = _base_curve(shape, n_samples)
    rng = np.random.default_rng(seed)
    demos = []
    for _ in range(n_demos):
        demo = base.copy()
        if offset_sd > 0:
            demo = demo + rng.normal(0.0, offset_sd, size=(1, base.shape[1]))
        if noise_sd > 0:
            demo = demo + rng.normal(0.0, noise_sd, size=base.shape)
        demos.append(demo)
    return demos
