"""Constrained quadratic minimization of the total map energy (M-step).

The objective over an M-node chain y (one column per workspace dimension)
is the sum of five quadratic energies:

* ``u_x = w_x * ||W y - K g||^2``        Cartesian approximation
* ``u_t = w_t * ||W T y - K g_t||^2``    tangent approximation
* ``u_l = w_l * ||W L y - K g_l||^2``    laplacian approximation
* ``u_e = lam * ||E y||^2``              stretching (even spacing)
* ``u_r = mu  * ||R y||^2``              bending (straightness)

with T, L, E, R the M-sized stencil matrices and K, W from the current
clustering. Point constraints pin chosen nodes to workspace targets and
are enforced exactly through the KKT system

    [[A, C^T], [C, 0]] @ [y; nu] = [b; z]

solved per workspace dimension with a direct symmetric factorization
(all d right-hand sides share one factorization).
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .coordinates import build_matrix
from .errors import DegenerateSystemError, DimensionError
from .validation import check_point

# Residual acceptance for the direct KKT solve, scaled by problem magnitude.
_RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class EnergyParams:
    """Non-negative weights of the five energy terms."""

    w_x: float = 1.0
    w_t: float = 0.0
    w_l: float = 0.0
    lam: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        values = (self.w_x, self.w_t, self.w_l, self.lam, self.mu)
        if not all(np.isfinite(v) and v >= 0 for v in values):
            raise ValueError(f"energy weights must be finite and >= 0, got {values}")
        if not any(v > 0 for v in values):
            raise ValueError("at least one energy weight must be positive")


@dataclass(frozen=True)
class PointConstraint:
    """Hard equality pinning node ``node_index`` (0-based) to ``target``."""

    node_index: int
    target: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "target", np.asarray(self.target, dtype=float).reshape(-1))
        if not np.all(np.isfinite(self.target)):
            raise ValueError("constraint target must be finite")


@dataclass(frozen=True)
class EnergyReport:
    """Per-term energies of a node chain; ``total`` is their sum."""

    u_x: float
    u_t: float
    u_l: float
    u_e: float
    u_r: float

    @property
    def total(self):
        return self.u_x + self.u_t + self.u_l + self.u_e + self.u_r

    def to_dict(self):
        return {"u_x": self.u_x, "u_t": self.u_t, "u_l": self.u_l,
                "u_e": self.u_e, "u_r": self.u_r, "total": self.total}


@dataclass(frozen=True)
class EnergyMatrices:
    """Weight-independent quadratic blocks for one clustering.

    The system matrix and right-hand side for any parameter choice are

        A = w_x*a_x + w_t*a_t + w_l*a_l + lam*a_e + mu*a_r
        b = w_x*b_x + w_t*b_t + w_l*b_l

    so sweeps over candidate weights (the alpha grid) reuse one assembly.
    """

    a_x: np.ndarray
    a_t: np.ndarray
    a_l: np.ndarray
    a_e: np.ndarray
    a_r: np.ndarray
    b_x: np.ndarray
    b_t: np.ndarray
    b_l: np.ndarray

    @property
    def n_nodes(self):
        return self.a_x.shape[0]

    @property
    def n_dims(self):
        return self.b_x.shape[1]


def _check_shapes(dset, cl, n_nodes):
    if cl.n_points != dset.g.shape[0]:
        raise DimensionError(
            f"clustering covers {cl.n_points} points, set has {dset.g.shape[0]}")
    if cl.n_nodes != n_nodes:
        raise DimensionError(
            f"clustering built for {cl.n_nodes} nodes, expected {n_nodes}")


def assemble(dset, cl, n_nodes):
    """Precompute the quadratic blocks for one clustering of a set."""
    _check_shapes(dset, cl, n_nodes)
    counts = cl.counts.astype(float)
    w2 = counts ** 2
    t_mat = build_matrix("tangent", n_nodes)
    l_mat = build_matrix("laplacian", n_nodes)
    e_mat = build_matrix("edge", n_nodes)
    r_mat = build_matrix("rib", n_nodes)
    return EnergyMatrices(
        a_x=np.diag(w2),
        a_t=t_mat.T @ (w2[:, None] * t_mat),
        a_l=l_mat.T @ (w2[:, None] * l_mat),
        a_e=e_mat.T @ e_mat,
        a_r=r_mat.T @ r_mat,
        b_x=counts[:, None] * cl.sums(dset.g),
        b_t=t_mat.T @ (counts[:, None] * cl.sums(dset.g_t)),
        b_l=l_mat.T @ (counts[:, None] * cl.sums(dset.g_l)),
    )


def check_constraints(constraints, n_nodes, n_dims):
    """Validate constraint indices/targets; returns them as a list."""
    cons = list(constraints or [])
    seen = set()
    for con in cons:
        if not 0 <= con.node_index < n_nodes:
            raise DimensionError(
                f"constraint node index {con.node_index} outside 0..{n_nodes - 1}")
        if con.node_index in seen:
            raise DimensionError(
                f"duplicate constraint on node {con.node_index}")
        seen.add(con.node_index)
        check_point(con.target, n_dims, name=f"constraint on node {con.node_index}")
    return cons


def solve_assembled(mats, params, constraints=()):
    """Exact minimizer of the assembled quadratic under point constraints."""
    m, d = mats.n_nodes, mats.n_dims
    cons = check_constraints(constraints, m, d)
    a = (params.w_x * mats.a_x + params.w_t * mats.a_t + params.w_l * mats.a_l
         + params.lam * mats.a_e + params.mu * mats.a_r)
    b = params.w_x * mats.b_x + params.w_t * mats.b_t + params.w_l * mats.b_l

    n_c = len(cons)
    if n_c == 0:
        kkt = a
        rhs = b
    else:
        c_mat = np.zeros((n_c, m))
        z = np.zeros((n_c, d))
        for row, con in enumerate(cons):
            c_mat[row, con.node_index] = 1.0
            z[row] = con.target
        kkt = np.block([[a, c_mat.T], [c_mat, np.zeros((n_c, n_c))]])
        rhs = np.vstack([b, z])

    try:
        with warnings.catch_warnings():
            # The residual check below is the arbiter of solution quality.
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            sol = scipy.linalg.solve(kkt, rhs, assume_a="sym")
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise DegenerateSystemError(
            f"singular system for {params} with {n_c} constraint(s): {exc}") from None
    if not np.all(np.isfinite(sol)):
        raise DegenerateSystemError(
            f"non-finite solution for {params} with {n_c} constraint(s)")
    residual = np.abs(kkt @ sol - rhs).max()
    scale = 1.0 + np.abs(rhs).max() + np.abs(kkt).max() * np.abs(sol).max()
    if residual > _RESIDUAL_RTOL * scale:
        raise DegenerateSystemError(
            f"ill-conditioned system for {params} with {n_c} constraint(s): "
            f"residual {residual:.3e} exceeds {_RESIDUAL_RTOL * scale:.3e}")

    nodes = sol[:m]
    for con in cons:
        nodes[con.node_index] = con.target
    return nodes


def solve(dset, cl, params, constraints=(), n_nodes=None):
    """Solve the full constrained minimization for one clustering.

    Returns the (M, d) node chain minimizing the total energy subject to
    every point constraint holding exactly.
    """
    if n_nodes is None:
        n_nodes = cl.n_nodes
    mats = assemble(dset, cl, n_nodes)
    return solve_assembled(mats, params, constraints)


def energies(nodes, dset, cl, params):
    """Evaluate the five energy terms of a node chain.

    Matches the quadratic objective minimized by :func:`solve` term by term.
    """
    nodes = np.asarray(nodes, dtype=float)
    m = nodes.shape[0]
    _check_shapes(dset, cl, m)
    if nodes.shape[1] != dset.n_dims:
        raise DimensionError(
            f"nodes have dimension {nodes.shape[1]}, set has {dset.n_dims}")
    counts = cl.counts.astype(float)

    def approx(y_c, data):
        resid = counts[:, None] * y_c - cl.sums(data)
        return float(np.sum(resid ** 2))

    t_mat = build_matrix("tangent", m)
    l_mat = build_matrix("laplacian", m)
    e_mat = build_matrix("edge", m)
    r_mat = build_matrix("rib", m)
    return EnergyReport(
        u_x=params.w_x * approx(nodes, dset.g),
        u_t=params.w_t * approx(t_mat @ nodes, dset.g_t),
        u_l=params.w_l * approx(l_mat @ nodes, dset.g_l),
        u_e=params.lam * float(np.sum((e_mat @ nodes) ** 2)),
        u_r=params.mu * float(np.sum((r_mat @ nodes) ** 2)),
    )
