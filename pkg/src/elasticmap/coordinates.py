"""Differential-coordinate and regularizer matrices for point chains.

Four banded stencil matrices act on a chain of ``n`` points:

* ``tangent``   (n, n):   zero first row, then first-difference rows.
* ``laplacian`` (n, n):   half of the second-difference stencil with
  one-sided (-2, 2) / (2, -2) boundary rows.
* ``edge``      (n-1, n): first-difference rows.
* ``rib``       (n-2, n): second-difference rows.

``tangent``/``laplacian`` re-express a trajectory by its first/second
discrete derivatives; ``edge``/``rib`` penalize uneven spacing and
curvature of a node chain when used in quadratic forms.
"""

import numpy as np

from .errors import SizeError
from .validation import check_trajectory

KINDS = ("tangent", "laplacian", "edge", "rib")


def build_matrix(kind, n):
    """Return the dense ``kind`` stencil matrix for a chain of ``n`` points.

    Parameters
    ----------
    kind : str
        One of ``"tangent"``, ``"laplacian"``, ``"edge"``, ``"rib"``.
    n : int
        Number of points in the chain; must be >= 3.

    Returns
    -------
    ndarray
        Shape (n, n) for tangent/laplacian, (n-1, n) for edge,
        (n-2, n) for rib.
    """
    if n < 3:
        raise SizeError(f"stencil matrices need n >= 3 points, got {n}")
    n = int(n)
    if kind == "tangent":
        mat = np.zeros((n, n))
        rows = np.arange(1, n)
        mat[rows, rows - 1] = -1.0
        mat[rows, rows] = 1.0
    elif kind == "laplacian":
        # Stored with the 1/2 factor applied: boundary rows (-1, 1) / (1, -1),
        # interior rows (1/2, -1, 1/2).
        mat = np.zeros((n, n))
        rows = np.arange(1, n - 1)
        mat[rows, rows - 1] = 0.5
        mat[rows, rows] = -1.0
        mat[rows, rows + 1] = 0.5
        mat[0, 0] = -1.0
        mat[0, 1] = 1.0
        mat[n - 1, n - 2] = 1.0
        mat[n - 1, n - 1] = -1.0
    elif kind == "edge":
        mat = np.zeros((n - 1, n))
        rows = np.arange(n - 1)
        mat[rows, rows] = -1.0
        mat[rows, rows + 1] = 1.0
    elif kind == "rib":
        mat = np.zeros((n - 2, n))
        rows = np.arange(n - 2)
        mat[rows, rows] = 1.0
        mat[rows, rows + 1] = -2.0
        mat[rows, rows + 2] = 1.0
    else:
        raise ValueError(f"unknown matrix kind {kind!r}; expected one of {KINDS}")
    return mat


def transform(points, kind):
    """Map a trajectory into tangent or laplacian coordinates.

    Returns the product of the size-matched stencil matrix with the point
    matrix; the output has the same shape as the input.
    """
    if kind not in ("tangent", "laplacian"):
        raise ValueError(
            f"transform expects kind 'tangent' or 'laplacian', got {kind!r}")
    points = check_trajectory(points)
    return build_matrix(kind, points.shape[0]) @ points
