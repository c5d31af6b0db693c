"""Scikit-learn style front end for the elastic-map fit."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import clustering, em, metrics
from .dataset import DemonstrationSet, build_set
from .solver import PointConstraint
from .validation import check_demos


class MultiCoordElasticMap(BaseEstimator):
    """Trajectory model fit to demonstrations as an M-node elastic chain.

    The chain minimizes weighted approximation energies in Cartesian,
    tangent and laplacian coordinates plus stretching/bending penalties,
    under hard point constraints, with the weights auto-tuned per
    iteration unless fixed.

    Parameters
    ----------
    n_nodes : int, default=100
        Number of chain nodes.
    lambda0, mu0 : float, default=1.5
        Balance constants (> 1) for the stretching/bending auto-tuning.
    max_iter : int, default=100
        Iteration cap for the cluster/tune/solve loop.
    retune_every_iteration : bool, default=True
        Re-tune weights each iteration; False freezes them after the first.
    fixed_weights : tuple of 3 floats, optional
        Approximation weights (cartesian, tangent, laplacian) overriding
        the auto-tuner.
    fixed_smoothing : tuple of 2 floats, optional
        (lam, mu) overriding the smoothing auto-tuning.
    target_length : int, optional
        Common resampling length for the demos; defaults to the longest.

    Attributes
    ----------
    nodes_ : ndarray of shape (n_nodes, n_dims)
        The optimized reproduction.
    labels_ : ndarray
        Final nearest-node assignment of the concatenated training data.
    weights_, energies_, n_iter_, converged_
        Final weight state, energy report, iteration count and
        convergence flag of the fit loop.

    Examples
    --------
    >>> from elasticmap import MultiCoordElasticMap, synth_demos
    >>> demos = synth_demos("s-curve", 3, 0.02, seed=0)
    >>> est = MultiCoordElasticMap(n_nodes=25).fit(demos)
    >>> est.nodes_.shape
    (25, 2)
    """

    def __init__(self, n_nodes=100, lambda0=1.5, mu0=1.5, max_iter=100,
                 retune_every_iteration=True, fixed_weights=None,
                 fixed_smoothing=None, target_length=None):
        self.n_nodes = n_nodes
        self.lambda0 = lambda0
        self.mu0 = mu0
        self.max_iter = max_iter
        self.retune_every_iteration = retune_every_iteration
        self.fixed_weights = fixed_weights
        self.fixed_smoothing = fixed_smoothing
        self.target_length = target_length

    def _config(self):
        return em.FitConfig(
            n_nodes=self.n_nodes, lambda0=self.lambda0, mu0=self.mu0,
            max_iter=self.max_iter,
            retune_every_iteration=self.retune_every_iteration,
            fixed_weights=self.fixed_weights,
            fixed_smoothing=self.fixed_smoothing)

    def _as_set(self, X):
        if isinstance(X, DemonstrationSet):
            return X
        if isinstance(X, np.ndarray) and X.ndim == 2:
            X = [X]
        return build_set(check_demos(X), target_length=self.target_length)

    def fit(self, X, y=None, constraints=None, start=None, end=None, vias=()):
        """Fit the chain to demonstrations.

        Parameters
        ----------
        X : DemonstrationSet, array of shape (T, d), or sequence of arrays
            The demonstrations.
        y : ignored
            Present for scikit-learn API compatibility.
        constraints : sequence of PointConstraint, optional
        start, end : array-like, optional
            Workspace points pinning the first/last node.
        vias : sequence of (node_index, point), optional

        Returns
        -------
        self
        """
        dset = self._as_set(X)
        cons = list(constraints or [])
        if start is not None:
            cons.append(PointConstraint(0, start))
        if end is not None:
            cons.append(PointConstraint(self.n_nodes - 1, end))
        for node_index, point in vias:
            cons.append(PointConstraint(int(node_index), point))
        result = em.fit(dset, cons, self._config())
        self.demonstrations_ = dset
        self.nodes_ = result.nodes
        self.labels_ = result.assignment
        self.weights_ = result.weights
        self.energies_ = result.energies
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.result_ = result
        return self

    def predict(self, X):
        """Nearest-node index for each point in ``X`` (shape (P, d))."""
        check_is_fitted(self, "nodes_")
        return clustering.assign(np.atleast_2d(np.asarray(X, dtype=float)),
                                 self.nodes_).assignment

    def fit_predict(self, X, y=None, **fit_params):
        """Fit, then return the training data's node assignment."""
        return self.fit(X, y, **fit_params).labels_

    def transform(self, X):
        """Euclidean distances from each point to every chain node."""
        check_is_fitted(self, "nodes_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        diffs = X[:, None, :] - self.nodes_[None, :, :]
        return np.sqrt(np.sum(diffs ** 2, axis=2))

    def score_report(self):
        """Metric report of the reproduction against the training demos."""
        check_is_fitted(self, "nodes_")
        return metrics.report(self.nodes_, self.demonstrations_)
