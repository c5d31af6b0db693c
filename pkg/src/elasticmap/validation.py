"""Input validation helpers.

Small ``check_*`` functions in the spirit of ``sklearn.utils.validation``:
they coerce to float64 arrays, enforce shape/finiteness contracts and raise
the package's exception types with readable messages.
"""

import numpy as np

from .errors import DimensionError, SizeError

MIN_POINTS = 3  # second-difference constructions need at least 3 rows


def check_trajectory(points, name="trajectory", min_len=MIN_POINTS):
    """Coerce ``points`` to a (T, d) float64 array and validate it.

    1-D input is treated as a single-channel trajectory of shape (T, 1).
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(
            f"{name} must be a 2-D array of points, got ndim={arr.ndim}")
    if arr.shape[0] < min_len:
        raise SizeError(
            f"{name} needs at least {min_len} points, got {arr.shape[0]}")
    if arr.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one spatial dimension")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains NaN or Inf entries")
    return arr


def check_demos(demos, min_len=MIN_POINTS):
    """Validate a sequence of trajectories sharing one spatial dimension."""
    checked = [check_trajectory(d, name=f"demo {i}", min_len=min_len)
               for i, d in enumerate(demos)]
    if not checked:
        raise SizeError("need at least one demonstration")
    dims = {d.shape[1] for d in checked}
    if len(dims) > 1:
        raise DimensionError(
            f"demonstrations have mixed dimensionality: {sorted(dims)}")
    return checked


def check_point(point, n_dims, name="point"):
    """Coerce to a finite (d,) vector matching the workspace dimension."""
    vec = np.asarray(point, dtype=float).reshape(-1)
    if vec.shape[0] != n_dims:
        raise DimensionError(
            f"{name} has dimension {vec.shape[0]}, expected {n_dims}")
    if not np.all(np.isfinite(vec)):
        raise DimensionError(f"{name} contains NaN or Inf entries")
    return vec
