import numpy as np
import pytest

import oracles
from elasticmap import (
    Clustering,
    DegenerateSystemError,
    DimensionError,
    EnergyParams,
    PointConstraint,
    assemble,
    build_set,
    energies,
    solve,
    solve_assembled,
    synth_demos,
)
from elasticmap.dataset import DemonstrationSet


def make_dset(inst):
    starts = np.cumsum([0] + [d.shape[0] for d in inst["demos"]])[:-1]
    return DemonstrationSet(demos=[np.array(d) for d in inst["demos"]],
                            g=inst["g"], g_t=inst["g_t"], g_l=inst["g_l"])


def run_both(inst):
    dset = make_dset(inst)
    cl = Clustering(assignment=inst["assignment"], n_nodes=inst["m"])
    w_x, w_t, w_l = inst["w"]
    params = EnergyParams(w_x=w_x, w_t=w_t, w_l=w_l,
                          lam=inst["lam"], mu=inst["mu"])
    cons = [PointConstraint(i, t)
            for i, t in zip(inst["con_indices"], inst["con_targets"])]
    got = solve(dset, cl, params, cons)
    a, b = oracles.assemble_quadratic(
        inst["g"], inst["g_t"], inst["g_l"], inst["assignment"], inst["m"],
        w_x, w_t, w_l, inst["lam"], inst["mu"])
    want = oracles.constrained_minimize(
        a, b, inst["con_indices"], inst["con_targets"], inst["m"])
    return got, want, a, b


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_nullspace_oracle(self, seed):
        inst = oracles.random_instance(seed)
        got, want, _, _ = run_both(inst)
        scale = max(1.0, float(np.abs(want).max()))
        assert np.abs(got - want).max() / scale < 1e-8

    @pytest.mark.parametrize("seed", range(12, 18))
    def test_stationarity_on_constraint_nullspace(self, seed):
        # At the optimum the gradient A y - b is supported entirely on the
        # constrained coordinates (it equals C' nu).
        inst = oracles.random_instance(seed)
        got, _, a, b = run_both(inst)
        grad = a @ got - b
        free = np.setdiff1d(np.arange(inst["m"]), inst["con_indices"])
        scale = 1.0 + float(np.abs(b).max())
        assert np.abs(grad[free]).max() < 1e-6 * scale

    @pytest.mark.parametrize("seed", range(18, 24))
    def test_perturbations_only_increase_energy(self, seed):
        inst = oracles.random_instance(seed)
        got, _, _, _ = run_both(inst)
        w_x, w_t, w_l = inst["w"]

        def total(y):
            return sum(oracles.total_energy(
                y, inst["g"], inst["g_t"], inst["g_l"], inst["assignment"],
                w_x, w_t, w_l, inst["lam"], inst["mu"]))

        base = total(got)
        rng = np.random.default_rng(seed + 1000)
        free = np.setdiff1d(np.arange(inst["m"]), inst["con_indices"])
        for _ in range(5):
            delta = np.zeros_like(got)
            delta[free] = rng.normal(scale=1e-3, size=(free.size, inst["d"]))
            assert total(got + delta) >= base - 1e-9 * (1 + abs(base))


class TestConstraints:
    def test_targets_met_exactly(self):
        demos = synth_demos("s-curve", 2, 0.03, seed=1, n_samples=30)
        dset = build_set(demos)
        nodes0 = np.linspace([0, 0], [1, 1], 10)
        cl = Clustering(assignment=np.argmin(
            np.sum((dset.g[:, None] - nodes0[None]) ** 2, axis=2), axis=1),
            n_nodes=10)
        cons = [PointConstraint(0, [0.0, 0.0]),
                PointConstraint(9, [1.0, 1.0]),
                PointConstraint(4, [0.5, 0.3])]
        got = solve(dset, cl, EnergyParams(w_x=1.0, lam=0.5, mu=0.5), cons)
        np.testing.assert_array_equal(got[0], [0.0, 0.0])
        np.testing.assert_array_equal(got[9], [1.0, 1.0])
        np.testing.assert_array_equal(got[4], [0.5, 0.3])

    def test_out_of_range_index(self):
        inst = oracles.random_instance(99)
        dset = make_dset(inst)
        cl = Clustering(assignment=inst["assignment"], n_nodes=inst["m"])
        with pytest.raises(DimensionError):
            solve(dset, cl, EnergyParams(), [PointConstraint(inst["m"], [0] * inst["d"])])

    def test_duplicate_index(self):
        inst = oracles.random_instance(98)
        dset = make_dset(inst)
        cl = Clustering(assignment=inst["assignment"], n_nodes=inst["m"])
        cons = [PointConstraint(0, [0] * inst["d"]),
                PointConstraint(0, [1] * inst["d"])]
        with pytest.raises(DimensionError):
            solve(dset, cl, EnergyParams(), cons)

    def test_constraint_validation_rejects_bad_target(self):
        with pytest.raises(ValueError):
            PointConstraint(0, [np.nan, 0.0])


class TestStructure:
    def test_dimensions_solve_independently(self):
        # Each workspace dimension solves the same system with its own
        # right-hand side; a column-extracted 1-D problem must agree.
        inst = oracles.random_instance(55, max_dims=3)
        if inst["d"] == 1:
            inst = oracles.random_instance(56, max_dims=3)
        got, _, _, _ = run_both(inst)
        col = 0
        one_d = dict(inst)
        one_d["g"] = inst["g"][:, [col]]
        one_d["g_t"] = inst["g_t"][:, [col]]
        one_d["g_l"] = inst["g_l"][:, [col]]
        one_d["d"] = 1
        one_d["con_targets"] = [np.atleast_1d(t)[[col]] for t in inst["con_targets"]]
        one_d["demos"] = [d[:, [col]] for d in inst["demos"]]
        got_1d, _, _, _ = run_both(one_d)
        np.testing.assert_allclose(got[:, [col]], got_1d, atol=1e-9)

    def test_translation_equivariance_with_cartesian_term(self):
        demos = synth_demos("arc", 2, 0.02, seed=3, n_samples=25)
        shift = np.array([10.0, -4.0])
        dset = build_set(demos)
        dset_shifted = build_set([d + shift for d in demos])
        cl = Clustering(assignment=np.arange(50) % 8, n_nodes=8)
        params = EnergyParams(w_x=1.0, w_t=0.5, w_l=0.5, lam=1.0, mu=1.0)
        base = solve(dset, cl, params)
        moved = solve(dset_shifted, cl, params)
        np.testing.assert_allclose(moved, base + shift, atol=1e-7)

    def test_heavier_smoothing_shrinks_bending(self):
        demos = synth_demos("s-curve", 1, 0.08, seed=6, n_samples=40)
        dset = build_set(demos)
        cl = Clustering(assignment=np.arange(40) % 12, n_nodes=12)
        prev = None
        for mu in (0.01, 1.0, 100.0):
            params = EnergyParams(w_x=1.0, lam=0.01, mu=mu)
            y = solve(dset, cl, params)
            bend = float(np.sum((oracles.stencil("rib", 12) @ y) ** 2))
            if prev is not None:
                assert bend <= prev + 1e-12
            prev = bend

    def test_assembled_blocks_reproduce_direct_path(self):
        inst = oracles.random_instance(77)
        dset = make_dset(inst)
        cl = Clustering(assignment=inst["assignment"], n_nodes=inst["m"])
        params = EnergyParams(w_x=1.2, w_t=0.3, w_l=0.4, lam=0.2, mu=0.7)
        mats = assemble(dset, cl, inst["m"])
        np.testing.assert_array_equal(solve_assembled(mats, params),
                                      solve(dset, cl, params))


class TestEnergies:
    @pytest.mark.parametrize("seed", range(30, 36))
    def test_matches_direct_evaluation(self, seed):
        inst = oracles.random_instance(seed)
        dset = make_dset(inst)
        cl = Clustering(assignment=inst["assignment"], n_nodes=inst["m"])
        w_x, w_t, w_l = inst["w"]
        params = EnergyParams(w_x=w_x, w_t=w_t, w_l=w_l,
                              lam=inst["lam"], mu=inst["mu"])
        rng = np.random.default_rng(seed)
        y = rng.normal(size=(inst["m"], inst["d"]))
        rep = energies(y, dset, cl, params)
        want = oracles.total_energy(y, inst["g"], inst["g_t"], inst["g_l"],
                                    inst["assignment"], w_x, w_t, w_l,
                                    inst["lam"], inst["mu"])
        got = (rep.u_x, rep.u_t, rep.u_l, rep.u_e, rep.u_r)
        np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-9)
        assert rep.total == pytest.approx(sum(want), rel=1e-9)

    def test_zero_for_perfectly_fit_chain(self):
        # One point per node, chain equal to the demo: all approximation
        # residuals vanish.
        t = np.linspace(0, 1, 8)
        demo = np.column_stack([t, t ** 2])
        dset = build_set([demo])
        cl = Clustering(assignment=np.arange(8), n_nodes=8)
        rep = energies(demo, dset, cl, EnergyParams(w_x=1, w_t=1, w_l=1))
        assert rep.u_x == pytest.approx(0.0, abs=1e-18)
        assert rep.u_t == pytest.approx(0.0, abs=1e-18)
        assert rep.u_l == pytest.approx(0.0, abs=1e-18)


class TestDegeneracy:
    def test_unpinned_translation_never_returns_garbage(self):
        # No Cartesian term and no constraints leaves a free translation.
        # The solver may refuse, but whatever it returns must be an exact
        # stationary point, never an inaccurate solution.
        demos = synth_demos("line", 1, 0.05, seed=8, n_samples=12)
        dset = build_set(demos)
        cl = Clustering(assignment=np.arange(12) % 5, n_nodes=5)
        params = EnergyParams(w_x=0.0, w_t=1.0, lam=0.1, mu=0.1)
        try:
            y = solve(dset, cl, params)
        except DegenerateSystemError:
            return
        a, b = oracles.assemble_quadratic(
            dset.g, dset.g_t, dset.g_l, cl.assignment, 5,
            0.0, 1.0, 0.0, 0.1, 0.1)
        assert np.all(np.isfinite(y))
        assert np.abs(a @ y - b).max() < 1e-6 * (1 + np.abs(b).max())

    def test_constraint_restores_solvability(self):
        demos = synth_demos("line", 1, 0.05, seed=8, n_samples=12)
        dset = build_set(demos)
        cl = Clustering(assignment=np.arange(12) % 5, n_nodes=5)
        params = EnergyParams(w_x=0.0, w_t=1.0, lam=0.1, mu=0.1)
        y = solve(dset, cl, params, [PointConstraint(0, [0.0, 0.0])])
        assert np.all(np.isfinite(y))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            EnergyParams(w_x=-1.0)
        with pytest.raises(ValueError):
            EnergyParams(w_x=0.0, w_t=0.0, w_l=0.0, lam=0.0, mu=0.0)
        with pytest.raises(ValueError):
            EnergyParams(w_x=np.inf)
