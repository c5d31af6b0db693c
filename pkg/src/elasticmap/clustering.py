"""Nearest-node clustering of concatenated data points (E-step).

Every data point is owned by exactly one map node: the Euclidean-nearest
one, with ties broken toward the lowest node index so that repeated runs
are bit-identical. The assignment induces the binary membership matrix K
(one 1 per column) and the diagonal count matrix W with W[i, i] equal to
the size of cluster i. Empty clusters are a legal state.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionError


@dataclass(frozen=True)
class Clustering:
    """Assignment of P data points to M nodes.

    ``assignment[p]`` is the 0-based index of the owning node.
    """

    assignment: np.ndarray
    n_nodes: int

    @property
    def n_points(self):
        return self.assignment.shape[0]

    @property
    def counts(self):
        """Cluster sizes, shape (M,)."""
        return np.bincount(self.assignment, minlength=self.n_nodes)

    @property
    def K(self):
        """Dense binary membership matrix, shape (M, P)."""
        mat = np.zeros((self.n_nodes, self.n_points))
        mat[self.assignment, np.arange(self.n_points)] = 1.0
        return mat

    @property
    def W(self):
        """Dense diagonal count matrix, shape (M, M)."""
        return np.diag(self.counts.astype(float))

    def sums(self, data):
        """Per-cluster row sums of ``data``, shape (M, d); equals K @ data."""
        data = np.asarray(data, dtype=float)
        if data.shape[0] != self.n_points:
            raise DimensionError(
                f"data has {data.shape[0]} rows, clustering covers {self.n_points}")
        out = np.zeros((self.n_nodes, data.shape[1]))
        np.add.at(out, self.assignment, data)
        return out


def assign(points, nodes):
    """Cluster each data point to its Euclidean-nearest node.

    Ties are broken toward the lowest node index. Pure and deterministic:
    identical inputs yield an identical clustering.
    """
    points = np.asarray(points, dtype=float)
    nodes = np.asarray(nodes, dtype=float)
    if points.ndim != 2 or nodes.ndim != 2:
        raise DimensionError("points and nodes must be 2-D arrays")
    if points.shape[1] != nodes.shape[1]:
        raise DimensionError(
            f"points have dimension {points.shape[1]}, nodes {nodes.shape[1]}")
    if nodes.shape[0] < 2:
        raise DimensionError("need at least 2 nodes to cluster against")
    d2 = cdist(points, nodes, "sqeuclidean")
    # argmin returns the first (lowest-index) minimizer, which is the tie rule
    labels = np.argmin(d2, axis=1)
    return Clustering(assignment=labels, n_nodes=nodes.shape[0])


def per_demo_clusterings(dset, nodes):
    """Clustering of each demonstration separately against the same nodes.

    Computed by slicing the full-set assignment per demo, so stacking the
    per-demo membership matrices in demo order reproduces the full K.
    """
    full = assign(dset.g, nodes)
    return [
        Clustering(assignment=full.assignment[dset.demo_slice(i)],
                   n_nodes=full.n_nodes)
        for i in range(dset.n_demos)
    ]
