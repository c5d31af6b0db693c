"""Automatic weighting of the energy terms.

Three tuners run once per EM iteration, before the M-step, all evaluated
at the current node chain:

* :func:`compute_betas` normalizes the raw per-coordinate costs so that
  coordinates with naturally larger magnitudes do not drown the others.
* :func:`optimize_alphas` searches the weight simplex for the mix whose
  solved chain best reproduces the demonstrations in Cartesian space.
* :func:`compute_smoothing` rescales the stretching/bending weights so
  those energies sit just above the total approximation energy.

The final approximation weights are ``w_c = alpha_c / beta_c``.
"""

from dataclasses import dataclass

import numpy as np

from .coordinates import transform
from .errors import DegenerateSystemError
from .solver import EnergyParams, assemble, energies, solve_assembled

# Costs below this are treated as exactly zero when normalizing.
ZERO_COST = 1e-15
# Floor applied to beta before the w = alpha / beta division.
BETA_FLOOR = 1e-6
# Simplex search: coarse grid step, refinement step and half-width (in
# refinement steps) of the window around the coarse optimum.
COARSE_STEP = 0.05
FINE_STEP = 0.01
FINE_HALF_WIDTH = 2


@dataclass(frozen=True)
class WeightState:
    """One iteration's hyperparameter bundle.

    ``alpha``/``beta`` are ``None`` when fixed weights bypass the tuner.
    """

    w_x: float
    w_t: float
    w_l: float
    lam: float
    mu: float
    alpha: tuple = None
    beta: tuple = None

    @classmethod
    def from_tuning(cls, alpha, beta, lam, mu):
        guarded = np.maximum(np.asarray(beta, dtype=float), BETA_FLOOR)
        w = np.asarray(alpha, dtype=float) / guarded
        return cls(w_x=float(w[0]), w_t=float(w[1]), w_l=float(w[2]),
                   lam=lam, mu=mu,
                   alpha=tuple(float(a) for a in alpha),
                   beta=tuple(float(b) for b in beta))

    def params(self):
        return EnergyParams(w_x=self.w_x, w_t=self.w_t, w_l=self.w_l,
                            lam=self.lam, mu=self.mu)

    def to_dict(self):
        return {
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "beta": list(self.beta) if self.beta is not None else None,
            "w": [self.w_x, self.w_t, self.w_l],
            "lambda": self.lam,
            "mu": self.mu,
        }


def _per_demo_stats(dset, per_demo, space="cartesian"):
    """Per-demo cluster counts and cluster sums in one coordinate space."""
    data = {"cartesian": dset.g, "tangent": dset.g_t, "laplacian": dset.g_l}[space]
    stats = []
    for i, cl in enumerate(per_demo):
        rows = data[dset.demo_slice(i)]
        stats.append((cl.counts.astype(float), cl.sums(rows)))
    return stats


def _reproduction_cost(nodes, stats):
    """Sum over demos of ||W_i y - K_i D_i||^2 for precomputed stats."""
    total = 0.0
    for counts, sums in stats:
        total += float(np.sum((counts[:, None] * nodes - sums) ** 2))
    return total


def compute_betas(nodes, dset, per_demo):
    """Normalized per-coordinate raw costs, summing to 1.

    For each coordinate space the cost is the summed per-demo squared
    mismatch between the (count-scaled) mapped chain and the clustered
    demo data. If any coordinate's cost is numerically zero the scaling
    is uninformative and falls back to the uniform (1/3, 1/3, 1/3).
    """
    nodes = np.asarray(nodes, dtype=float)
    chain = {
        "cartesian": nodes,
        "tangent": transform(nodes, "tangent"),
        "laplacian": transform(nodes, "laplacian"),
    }
    totals = np.array([
        _reproduction_cost(chain[space], _per_demo_stats(dset, per_demo, space))
        for space in ("cartesian", "tangent", "laplacian")
    ])
    if np.any(totals < ZERO_COST):
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    betas = totals / totals.sum()
    return (float(betas[0]), float(betas[1]), float(betas[2]))


def _candidate_simplex(a_x, a_t):
    a_l = 1.0 - a_x - a_t
    if a_l < 0.0:
        a_l = 0.0
    return (a_x, a_t, a_l)


def optimize_alphas(dset, cl, per_demo, constraints, betas, smoothing, n_nodes):
    """Simplex point minimizing the Cartesian reproduction error.

    Each candidate ``alpha`` is converted to weights ``alpha / beta``, the
    constrained chain is re-solved with the given (lam, mu), and the summed
    per-demo Cartesian error of that chain is scored. Search is a
    deterministic sweep of the 2-simplex at step 0.05 followed by one
    refinement pass at step 0.01 within +/-0.02 of the coarse optimum.
    Ties go to the larger alpha_x, then larger alpha_t. Candidates whose
    inner solve is degenerate are skipped.
    """
    lam, mu = smoothing
    mats = assemble(dset, cl, n_nodes)
    stats = _per_demo_stats(dset, per_demo, "cartesian")
    guarded = np.maximum(np.asarray(betas, dtype=float), BETA_FLOOR)

    best = None  # (objective, a_x, a_t, a_l)

    def consider(a_x, a_t):
        nonlocal best
        alpha = _candidate_simplex(a_x, a_t)
        w = np.asarray(alpha) / guarded
        params = EnergyParams(w_x=w[0], w_t=w[1], w_l=w[2], lam=lam, mu=mu)
        try:
            nodes = solve_assembled(mats, params, constraints)
        except DegenerateSystemError:
            return
        obj = _reproduction_cost(nodes, stats)
        if best is None or obj < best[0] or (
                obj == best[0] and (alpha[0], alpha[1]) > (best[1], best[2])):
            best = (obj, alpha[0], alpha[1], alpha[2])

    steps = round(1.0 / COARSE_STEP)
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            consider(i * COARSE_STEP, j * COARSE_STEP)
    if best is None:
        raise DegenerateSystemError(
            "every candidate weighting produced a degenerate system; "
            "add a point constraint or provide fixed weights")

    base_x, base_t = best[1], best[2]
    for p in range(-FINE_HALF_WIDTH, FINE_HALF_WIDTH + 1):
        for q in range(-FINE_HALF_WIDTH, FINE_HALF_WIDTH + 1):
            if p == 0 and q == 0:
                continue
            a_x = base_x + p * FINE_STEP
            a_t = base_t + q * FINE_STEP
            if a_x < -1e-12 or a_t < -1e-12 or a_x + a_t > 1.0 + 1e-12:
                continue
            consider(max(a_x, 0.0), max(a_t, 0.0))

    return (best[1], best[2], best[3])


def compute_smoothing(nodes, dset, cl, weights, lambda0, mu0, fallback=None):
    """Stretching/bending weights from the energy-balance rule.

    With the approximation weights fixed, lam (resp. mu) is set so that
    the stretching (resp. bending) energy of the *current* chain equals
    lambda0 (resp. mu0) times its total approximation energy. A chain
    whose stretching or bending cost is numerically zero keeps the
    ``fallback`` value, or (lambda0, mu0) when none is given.
    """
    nodes = np.asarray(nodes, dtype=float)
    w_x, w_t, w_l = weights
    report = energies(nodes, dset, cl,
                      EnergyParams(w_x=w_x, w_t=w_t, w_l=w_l, lam=1.0, mu=1.0))
    approx_total = report.u_x + report.u_t + report.u_l
    den_e = report.u_e  # lam=1 makes this the raw ||E y||^2
    den_r = report.u_r
    fb_lam, fb_mu = fallback if fallback is not None else (lambda0, mu0)
    lam = lambda0 * approx_total / den_e if den_e >= ZERO_COST else fb_lam
    mu = mu0 * approx_total / den_r if den_r >= ZERO_COST else fb_mu
    return (float(lam), float(mu))
