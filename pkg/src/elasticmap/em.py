"""The full fit: alternate clustering, weight tuning and constrained solves.

Each iteration clusters the concatenated data to the current chain,
re-tunes the energy weights (unless frozen or fixed), and solves the
constrained quadratic for the next chain. The loop stops when the
assignment array repeats exactly, or at the iteration cap (not an error;
the ``converged`` flag reports which).
"""

from dataclasses import dataclass, field

import numpy as np

from . import autotune, clustering, solver
from .dataset import resample
from .errors import DimensionError
from .validation import check_point


@dataclass(frozen=True)
class FitConfig:
    """Knobs of the fit loop.

    ``fixed_weights`` bypasses the alpha/beta tuner; ``fixed_smoothing``
    bypasses the lam/mu balancing (both may be combined for a fully
    manual parameterization). ``retune_every_iteration=False`` tunes on
    the first iteration only and freezes the result.
    """

    n_nodes: int = 100
    lambda0: float = 1.5
    mu0: float = 1.5
    max_iter: int = 100
    retune_every_iteration: bool = True
    fixed_weights: tuple = None
    fixed_smoothing: tuple = None

    def __post_init__(self):
        if self.n_nodes < 3:
            raise ValueError(f"n_nodes must be >= 3, got {self.n_nodes}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.lambda0 > 1 or not self.mu0 > 1:
            raise ValueError(
                f"lambda0 and mu0 must be > 1, got {self.lambda0}, {self.mu0}")
        if self.fixed_weights is not None:
            fw = tuple(float(v) for v in self.fixed_weights)
            if len(fw) != 3 or any(v < 0 for v in fw) or sum(fw) <= 0:
                raise ValueError(
                    "fixed_weights must be 3 values >= 0 with positive sum")
            object.__setattr__(self, "fixed_weights", fw)
        if self.fixed_smoothing is not None:
            fs = tuple(float(v) for v in self.fixed_smoothing)
            if len(fs) != 2 or any(v < 0 for v in fs):
                raise ValueError("fixed_smoothing must be 2 values >= 0")
            object.__setattr__(self, "fixed_smoothing", fs)


@dataclass
class FitResult:
    """Optimized chain plus the trail of the iterations that produced it."""

    nodes: np.ndarray
    weights: autotune.WeightState
    energies: solver.EnergyReport
    iterations: int
    converged: bool
    assignment: np.ndarray = field(repr=False)
    weight_trace: list = field(default_factory=list, repr=False)
    energy_trace: list = field(default_factory=list, repr=False)


def init_nodes(dset, n_nodes):
    """Initial chain: the pointwise mean demonstration resampled to M nodes."""
    return resample(dset.mean_demo(), n_nodes)


def _tune(dset, cl, nodes, constraints, cfg, prev):
    """One pass of the weight tuners; ``prev`` carries last iteration's state."""
    prev_lam = prev.lam if prev is not None else cfg.lambda0
    prev_mu = prev.mu if prev is not None else cfg.mu0

    if cfg.fixed_weights is not None:
        w_x, w_t, w_l = cfg.fixed_weights
        alpha = beta = None
    else:
        per_demo = [
            clustering.Clustering(assignment=cl.assignment[dset.demo_slice(i)],
                                  n_nodes=cl.n_nodes)
            for i in range(dset.n_demos)
        ]
        beta = autotune.compute_betas(nodes, dset, per_demo)
        alpha = autotune.optimize_alphas(
            dset, cl, per_demo, constraints, beta, (prev_lam, prev_mu),
            cfg.n_nodes)
        state = autotune.WeightState.from_tuning(alpha, beta, prev_lam, prev_mu)
        w_x, w_t, w_l = state.w_x, state.w_t, state.w_l

    if cfg.fixed_smoothing is not None:
        lam, mu = cfg.fixed_smoothing
    else:
        lam, mu = autotune.compute_smoothing(
            nodes, dset, cl, (w_x, w_t, w_l), cfg.lambda0, cfg.mu0,
            fallback=(prev_lam, prev_mu))

    if alpha is None:
        return autotune.WeightState(w_x=w_x, w_t=w_t, w_l=w_l, lam=lam, mu=mu)
    return autotune.WeightState.from_tuning(alpha, beta, lam, mu)


def fit(dset, constraints=(), config=None):
    """Run the fit loop on a demonstration set.

    Parameters
    ----------
    dset : DemonstrationSet
    constraints : sequence of PointConstraint, optional
    config : FitConfig, optional

    Returns
    -------
    FitResult
        ``iterations`` counts completed solve steps; ``converged`` is True
        when one further clustering pass leaves the assignment unchanged.
    """
    cfg = config or FitConfig()
    constraints = solver.check_constraints(constraints, cfg.n_nodes, dset.n_dims)
    for con in constraints:
        check_point(con.target, dset.n_dims, name=f"constraint on node {con.node_index}")

    nodes = init_nodes(dset, cfg.n_nodes)
    state = None
    prev_assignment = None
    weight_trace, energy_trace = [], []
    iterations = 0
    converged = False
    final_cl = None

    while iterations < cfg.max_iter:
        cl = clustering.assign(dset.g, nodes)
        if prev_assignment is not None and np.array_equal(
                cl.assignment, prev_assignment):
            converged = True
            final_cl = cl
            break
        if state is None or cfg.retune_every_iteration:
            state = _tune(dset, cl, nodes, constraints, cfg, state)
        nodes = solver.solve_assembled(
            solver.assemble(dset, cl, cfg.n_nodes), state.params(), constraints)
        iterations += 1
        prev_assignment = cl.assignment
        final_cl = cl
        weight_trace.append(state)
        energy_trace.append(solver.energies(nodes, dset, cl, state.params()))
    else:
        # Iteration cap reached; the chain may still be at a fixed point.
        cl = clustering.assign(dset.g, nodes)
        converged = bool(np.array_equal(cl.assignment, prev_assignment))
        final_cl = cl

    return FitResult(
        nodes=nodes,
        weights=state,
        energies=energy_trace[-1],
        iterations=iterations,
        converged=converged,
        assignment=final_cl.assignment,
        weight_trace=weight_trace,
        energy_trace=energy_trace,
    )


def reproduce(dset, start=None, end=None, vias=(), config=None):
    """Fit with endpoint/via constraints given as workspace points.

    ``start`` pins the first node, ``end`` the last; ``vias`` is a
    sequence of ``(node_index, point)`` pairs. Equivalent to :func:`fit`
    with the corresponding point constraints.
    """
    cfg = config or FitConfig()
    constraints = []
    if start is not None:
        constraints.append(solver.PointConstraint(0, start))
    if end is not None:
        constraints.append(solver.PointConstraint(cfg.n_nodes - 1, end))
    for node_index, point in vias:
        constraints.append(solver.PointConstraint(int(node_index), point))
    indices = [c.node_index for c in constraints]
    if len(set(indices)) != len(indices):
        raise DimensionError(
            f"start/end/via constraints collide on node indices {indices}")
    return fit(dset, constraints, cfg)
