import numpy as np
import pytest

from pointsource import forward, identifynd, laplace, model


def make_records(x1, sensors, n, grid, lambda0=0.0, intensity=1.0):
    src = model.PointSource(location=x1, intensity=intensity)
    return [model.SensorRecord(
        location=b,
        samples=forward.free_space_response([src], b, grid, n=n,
                                            lambda0=lambda0),
        grid=grid) for b in sensors]


SENSORS_3D = [np.array([1.1, 0.2, 0.1]), np.array([-0.7, 0.9, -0.2]),
              np.array([0.3, -1.0, 0.5]), np.array([-0.2, -0.3, -1.2])]
X1_3D = np.array([0.2, 0.1, -0.3])


@pytest.fixture(scope="module")
def records_3d():
    grid = model.TimeGrid(tau=1e-3, num_steps=12000)
    return make_records(X1_3D, SENSORS_3D, 3, grid)


class TestTransformRatio:
    def test_self_ratio_is_one(self, records_3d):
        lams = np.array([9.0, 16.0, 25.0])
        phi = laplace.laplace_grid(records_3d[0].samples,
                                   records_3d[0].grid, lams)
        ratio = identifynd.transform_ratio(phi, phi)
        np.testing.assert_allclose(ratio.values, 1.0, rtol=1e-14)

    def test_leading_order_value(self):
        # distances 1 and 2 at lam=100: ratio ~ (a_i/a_j) exp(-10)
        grid = model.TimeGrid(tau=1e-4, num_steps=200000)
        x1 = np.array([0.0, 0.0, 0.0])
        sensors = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 2.0, 0.0])]
        recs = make_records(x1, sensors, 3, grid)
        lams = np.array([100.0])
        phi_i = laplace.laplace_grid(recs[0].samples, grid, lams)
        phi_j = laplace.laplace_grid(recs[1].samples, grid, lams)
        ratio = identifynd.transform_ratio(phi_j, phi_i)
        want = 0.5 * np.exp(-10.0)
        assert abs(ratio.values[0] - want) / want < 0.1

    def test_swap_inverts(self, records_3d):
        lams = np.array([9.0, 16.0, 25.0])
        p0 = laplace.laplace_grid(records_3d[0].samples, records_3d[0].grid,
                                  lams)
        p1 = laplace.laplace_grid(records_3d[1].samples, records_3d[1].grid,
                                  lams)
        r01 = identifynd.transform_ratio(p1, p0)
        r10 = identifynd.transform_ratio(p0, p1)
        np.testing.assert_allclose(r01.values * r10.values, 1.0, rtol=1e-12)

    def test_below_truncation_denominator_rejected(self):
        lams = np.array([1.0, 2.0])
        phi = laplace.LaplaceSamples(
            lambdas=lams, values=np.array([1e-12, 1.0]),
            truncation=np.array([1e-6, 1e-9]),
            discretization=np.zeros(2), horizon=1.0)
        good = laplace.LaplaceSamples(
            lambdas=lams, values=np.ones(2), truncation=np.zeros(2),
            discretization=np.zeros(2), horizon=1.0)
        with pytest.raises(ValueError):
            identifynd.transform_ratio(good, phi)


class TestDistanceDifferenceFit:
    def test_synthetic_exact_model(self):
        # the distance prefactor cancels in the ratio of ratios: the step
        # values are exactly constant and the fit returns d with no slope
        alphas = np.arange(3, 10, dtype=float)
        ai, aj = 1.0, 1.5
        g = (ai / aj) * np.exp(-alphas * (aj - ai))
        ratio = identifynd.RatioSeries(lambdas=alphas ** 2, values=g,
                                       rel_bounds=np.zeros_like(g))
        fit = identifynd.distance_difference_fit(alphas, ratio)
        np.testing.assert_allclose(fit.d, 0.5, atol=1e-13)
        assert np.ptp(fit.steps) <= 1e-14
        assert abs(fit.slope) < 1e-12

    def test_symmetric_pair_zero(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=8000)
        x1 = np.array([0.0, 0.0, 0.0])
        sensors = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])]
        recs = make_records(x1, sensors, 3, grid)
        ladder = np.arange(3, 8, dtype=float)
        phis = [laplace.laplace_grid(r.samples, grid, ladder ** 2)
                for r in recs]
        ratio = identifynd.transform_ratio(phis[1], phis[0])
        fit = identifynd.distance_difference_fit(ladder, ratio)
        assert abs(fit.d) <= max(fit.uncertainty, 1e-8)

    def test_k0_kernel_convergence(self):
        # plane case: the fitted difference lands within 2e-2
        grid = model.TimeGrid(tau=1e-3, num_steps=12000)
        x1 = np.array([0.1, 0.2])
        sensors = [np.array([1.1, 0.3]), np.array([-0.9, -0.4])]
        recs = make_records(x1, sensors, 2, grid)
        ladder = np.arange(3, 8, dtype=float)
        phis = [laplace.laplace_grid(r.samples, grid, ladder ** 2)
                for r in recs]
        ratio = identifynd.transform_ratio(phis[1], phis[0])
        fit = identifynd.distance_difference_fit(ladder, ratio)
        want = np.linalg.norm(x1 - sensors[1]) - np.linalg.norm(x1 - sensors[0])
        assert abs(fit.d - want) <= 2e-2

    def test_short_ladder_rejected(self):
        alphas = np.arange(3, 6, dtype=float)
        g = np.exp(-alphas)
        ratio = identifynd.RatioSeries(lambdas=alphas ** 2, values=g,
                                       rel_bounds=np.zeros_like(g))
        with pytest.raises(ValueError):
            identifynd.distance_difference_fit(alphas, ratio)


class TestPairwiseDistanceSolve:
    def test_space_closed_form(self):
        ai, aj, d = 1.0, 1.5, 0.5
        g = (ai / aj) * np.exp(-5.0 * d)
        got = identifynd.pairwise_distance_solve(3, g, d, 5.0)
        np.testing.assert_allclose(got, (ai, aj), rtol=1e-12)

    def test_plane_closed_form(self):
        ai, aj, d = 1.0, 1.5, 0.5
        g = np.sqrt(ai / aj) * np.exp(-5.0 * d)
        got = identifynd.pairwise_distance_solve(2, g, d, 5.0)
        np.testing.assert_allclose(got, (ai, aj), rtol=1e-12)

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            identifynd.pairwise_distance_solve(3, 1.0, 0.0, 5.0)
        with pytest.raises(ValueError):
            # rho within 1e-6 of 1 while d != 0
            identifynd.pairwise_distance_solve(3, np.exp(-5.0 * 0.5), 0.5,
                                               5.0)


class TestCircumcenter:
    def test_plane_symmetric(self):
        c = identifynd.circumcenter([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(c, [0.0, 0.0], atol=1e-14)

    def test_regular_tetrahedron(self):
        pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                       dtype=float)
        c = identifynd.circumcenter(pts)
        np.testing.assert_allclose(c, [0, 0, 0], atol=1e-14)

    def test_generic_simplex_equidistant(self):
        pts = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
                       dtype=float)
        c = identifynd.circumcenter(pts)
        d = np.linalg.norm(pts - c[None, :], axis=1)
        assert np.ptp(d) <= 1e-12

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            identifynd.circumcenter([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


class TestGeneralPosition:
    def test_plane_ok(self):
        ok, w = identifynd.in_general_position([[0, 0], [1, 0], [0, 1]], 2)
        assert ok and w is None

    def test_collinear_triple_found(self):
        pts = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 1.0]]
        ok, w = identifynd.in_general_position(pts, 2)
        assert not ok
        assert w == (0, 1, 2)

    def test_axis_probe_layout_is_degenerate(self):
        # the six axis points contain coplanar quadruples (four of them lie
        # in each coordinate plane); brute force over quadruples agrees
        m = 1.0
        pts = [[m, 0, 0], [-m, 0, 0], [0, m, 0], [0, -m, 0], [0, 0, m],
               [0, 0, -m]]
        ok, witness = identifynd.in_general_position(pts, 3)
        from itertools import combinations
        brute = all(
            abs(np.linalg.det(np.asarray(pts)[list(idx[1:])]
                              - np.asarray(pts)[idx[0]])) > 1e-12
            for idx in combinations(range(6), 4))
        assert ok == brute
        assert not ok
        assert witness == (0, 1, 2, 3)

    def test_generic_cloud_ok(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(6, 3))
        ok, _ = identifynd.in_general_position(pts, 3)
        assert ok

    def test_coplanar_quadruple_found(self):
        pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
        ok, w = identifynd.in_general_position(pts, 3)
        assert not ok and w == (0, 1, 2, 3)


class TestMultilaterate:
    def test_exact_recovery(self):
        x = np.array([0.3, -0.2, 0.5])
        res = identifynd.multilaterate(
            SENSORS_3D, [np.linalg.norm(x - b) for b in SENSORS_3D])
        np.testing.assert_allclose(res.x, x, atol=1e-10)
        assert res.residual_norm <= 1e-10

    def test_perturbed_distances(self):
        # error tracks condition_number * perturbation up to an O(1)
        # geometry factor (empirically <= 1.4 on this layout)
        x = np.array([0.3, -0.2, 0.5])
        rng = np.random.default_rng(0)
        alphas = np.array([np.linalg.norm(x - b) for b in SENSORS_3D])
        noisy = alphas + 1e-3 * rng.standard_normal(alphas.shape)
        res = identifynd.multilaterate(SENSORS_3D, noisy)
        assert np.linalg.norm(res.x - x) <= 3 * res.condition_number * 1e-3
        assert res.residual_norm > 0

    def test_residual_grows_with_perturbation(self):
        x = np.array([0.3, -0.2, 0.5])
        alphas = np.array([np.linalg.norm(x - b) for b in SENSORS_3D])
        prev = -1.0
        for scale in (1e-6, 1e-4, 1e-2):
            res = identifynd.multilaterate(SENSORS_3D,
                                           alphas + scale * np.array(
                                               [1, -1, 1, -1]))
            assert res.residual_norm > prev
            prev = res.residual_norm

    def test_collinear_rejected(self):
        sensors = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]
        with pytest.raises(ValueError):
            identifynd.multilaterate(sensors, [1.0, 1.0, 1.0])

    def test_rigid_motion_equivariance(self):
        x = np.array([0.3, -0.2, 0.5])
        alphas = np.array([np.linalg.norm(x - b) for b in SENSORS_3D])
        theta = 0.7
        rot = np.array([[np.cos(theta), -np.sin(theta), 0],
                        [np.sin(theta), np.cos(theta), 0], [0, 0, 1]])
        shift = np.array([2.0, -1.0, 0.5])
        moved = [rot @ b + shift for b in SENSORS_3D]
        res = identifynd.multilaterate(moved, alphas)
        np.testing.assert_allclose(res.x, rot @ x + shift, atol=1e-9)


class TestLocateSourceND:
    def test_space_pipeline(self, records_3d):
        rec = identifynd.locate_source_nd(records_3d, n=3,
                                          lam_window=(6.0, 50.0))
        assert np.linalg.norm(rec.x1_hat - X1_3D) <= 5e-2
        alpha_true = [np.linalg.norm(X1_3D - b) for b in SENSORS_3D]
        np.testing.assert_allclose(rec.alpha_hat, alpha_true, atol=2e-2)
        assert not rec.degenerate

    def test_difference_antisymmetry_and_chains(self, records_3d):
        rec = identifynd.locate_source_nd(records_3d, n=3,
                                          lam_window=(6.0, 50.0))
        d = rec.d_matrix
        np.testing.assert_allclose(d, -d.T, atol=1e-14)
        s = d.shape[0]
        for i in range(s):
            for j in range(s):
                for k in range(s):
                    chain = d[i, j] + d[j, k]
                    tol = 3 * (rec.d_uncertainty[i, j]
                               + rec.d_uncertainty[j, k]
                               + rec.d_uncertainty[i, k]) + 1e-9
                    assert abs(chain - d[i, k]) <= tol

    def test_guard_drops_untrustworthy_small_lambdas(self):
        # short horizon: the truncation bound rejects the smallest rungs
        grid = model.TimeGrid(tau=1e-3, num_steps=2000)   # T = 2
        recs = make_records(X1_3D, SENSORS_3D, 3, grid)
        rec = identifynd.locate_source_nd(recs, n=3, lam_window=(4.0, 50.0))
        assert rec.ladder[0] >= 3.0
        assert any("guard" in d for d in rec.diagnostics)
        assert np.linalg.norm(rec.x1_hat - X1_3D) <= 5e-2

    @pytest.mark.parametrize("seed", [3, 9, 21])
    def test_light_noise_still_locates(self, seed):
        grid = model.TimeGrid(tau=1e-3, num_steps=20000)
        src = model.PointSource(location=X1_3D, intensity=1.0)
        rng = np.random.default_rng(seed)
        recs = []
        sigma = 0.0
        for b in SENSORS_3D:
            psi = forward.free_space_response([src], b, grid, n=3)
            sigma = max(sigma, 1e-5 * np.abs(psi).max())
            recs.append(model.SensorRecord(
                location=b,
                samples=psi + sigma * rng.standard_normal(psi.shape),
                grid=grid))
        rec = identifynd.locate_source_nd(recs, n=3, lam_window=(6.0, 50.0),
                                          noise_sigma=sigma)
        assert np.linalg.norm(rec.x1_hat - X1_3D) <= 5e-2

    def test_noise_beyond_budget_fails_informatively(self):
        # per-sample noise at 1e-4 of the peak drowns the transform window
        # for this geometry: the pipeline must refuse with the ladder
        # diagnosis instead of returning noise-driven estimates
        grid = model.TimeGrid(tau=1e-3, num_steps=20000)
        src = model.PointSource(location=X1_3D, intensity=1.0)
        rng = np.random.default_rng(10)
        recs = []
        sigma = 0.0
        for b in SENSORS_3D:
            psi = forward.free_space_response([src], b, grid, n=3)
            sigma = max(sigma, 1e-4 * np.abs(psi).max())
            recs.append(model.SensorRecord(
                location=b,
                samples=psi + sigma * rng.standard_normal(psi.shape),
                grid=grid))
        with pytest.raises(ValueError, match="ladder"):
            identifynd.locate_source_nd(recs, n=3, lam_window=(6.0, 50.0),
                                        noise_sigma=sigma)

    def test_reaction_coefficient_handled(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=12000)
        recs = make_records(X1_3D, SENSORS_3D, 3, grid, lambda0=0.35)
        rec = identifynd.locate_source_nd(recs, n=3, lam_window=(6.0, 50.0),
                                          lambda0=0.35)
        assert np.linalg.norm(rec.x1_hat - X1_3D) <= 5e-2

    def test_plane_pipeline(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=20000)
        x1 = np.array([0.2, 0.3])
        sensors = [np.array([1.2, 0.1]), np.array([-0.8, 0.9]),
                   np.array([-0.2, -1.1])]
        recs = make_records(x1, sensors, 2, grid)
        rec = identifynd.locate_source_nd(recs, n=2, lam_window=(6.0, 50.0))
        assert np.linalg.norm(rec.x1_hat - x1) <= 5e-2

    def test_degenerate_circumcenter_path(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=8000)
        sensors = [np.array([1.0, 0, 0]), np.array([0, 1.0, 0]),
                   np.array([0, 0, 1.0]), np.array([1.0, 1, 1])]
        center = identifynd.circumcenter(sensors)
        recs = make_records(center, sensors, 3, grid)
        rec = identifynd.locate_source_nd(recs, n=3, lam_window=(6.0, 50.0))
        assert rec.degenerate
        np.testing.assert_allclose(rec.x1_hat, center, atol=1e-9)

    def test_collinear_sensors_rejected_before_transforms(self):
        grid = model.TimeGrid(tau=1e-2, num_steps=10)
        recs = [model.SensorRecord(location=np.array([float(k), 0.0]),
                                   samples=np.zeros(grid.num_samples),
                                   grid=grid) for k in range(3)]
        with pytest.raises(ValueError, match="general position"):
            identifynd.locate_source_nd(recs, n=2, lam_window=(6.0, 50.0))

    def test_too_few_sensors(self):
        grid = model.TimeGrid(tau=1e-2, num_steps=10)
        recs = [model.SensorRecord(location=np.array([0.0, 0.0, 1.0]),
                                   samples=np.zeros(grid.num_samples),
                                   grid=grid)]
        with pytest.raises(ValueError, match="sensors"):
            identifynd.locate_source_nd(recs, n=3, lam_window=(6.0, 50.0))

    @pytest.mark.parametrize("n,seed", [(3, 0), (3, 5), (3, 12),
                                        (2, 1), (2, 8)])
    def test_random_geometries(self, n, seed):
        # random sensor clouds and source positions at unit scale
        rng = np.random.default_rng(seed)
        for _ in range(10):
            sensors = rng.uniform(-1.4, 1.4, size=(n + 1, n))
            x1 = rng.uniform(-0.6, 0.6, size=n)
            dists = np.linalg.norm(sensors - x1, axis=1)
            ok, _ = identifynd.in_general_position(sensors, n)
            if ok and dists.min() > 0.3 and dists.max() < 2.5:
                break
        else:
            pytest.skip("no usable random layout")
        grid = model.TimeGrid(tau=1e-3, num_steps=15000)
        recs = make_records(x1, list(sensors), n, grid)
        rec = identifynd.locate_source_nd(recs, n=n, lam_window=(6.0, 50.0))
        assert np.linalg.norm(rec.x1_hat - x1) <= 5e-2

    def test_rigid_motion_equivariance(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=8000)
        theta = 0.4
        rot = np.array([[np.cos(theta), -np.sin(theta), 0],
                        [np.sin(theta), np.cos(theta), 0], [0, 0, 1]])
        shift = np.array([1.5, -2.0, 0.7])
        base = identifynd.locate_source_nd(
            make_records(X1_3D, SENSORS_3D, 3, grid), n=3,
            lam_window=(6.0, 50.0))
        moved = identifynd.locate_source_nd(
            make_records(rot @ X1_3D + shift,
                         [rot @ b + shift for b in SENSORS_3D], 3, grid),
            n=3, lam_window=(6.0, 50.0))
        np.testing.assert_allclose(moved.x1_hat, rot @ base.x1_hat + shift,
                                   atol=1e-8)


class TestRecoverIntensityND:
    def test_constant_round_trip(self, records_3d):
        alpha = [np.linalg.norm(X1_3D - b) for b in SENSORS_3D]
        fit = identifynd.recover_intensity_nd(records_3d, alpha, n=3)
        grid = records_3d[0].grid
        win = grid.times() >= 0.1 * grid.horizon
        rel = np.linalg.norm(fit.q[win] - 1.0) / np.sqrt(win.sum())
        assert rel <= 0.02
        assert fit.spread <= 0.02

    def test_varying_intensity_round_trip(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=5000)
        t = grid.times()
        q = 1.0 + np.sin(t)
        recs = make_records(X1_3D, SENSORS_3D[:2], 3, grid, intensity=q)
        alpha = [np.linalg.norm(X1_3D - b) for b in SENSORS_3D[:2]]
        fit = identifynd.recover_intensity_nd(recs, alpha, n=3)
        win = t >= 0.1 * grid.horizon
        rel = np.linalg.norm(fit.q[win] - q[win]) / np.linalg.norm(q[win])
        assert rel <= 0.05

    def test_zero_series(self):
        grid = model.TimeGrid(tau=1e-3, num_steps=1000)
        recs = [model.SensorRecord(location=np.array([1.0, 0, 0]),
                                   samples=np.zeros(grid.num_samples),
                                   grid=grid)]
        fit = identifynd.recover_intensity_nd(recs, [1.0], n=3)
        np.testing.assert_allclose(fit.q, 0.0, atol=1e-12)

    def test_bad_distance_flagged_by_spread(self, records_3d):
        alpha = np.array([np.linalg.norm(X1_3D - b) for b in SENSORS_3D])
        alpha_bad = alpha * np.array([1.3, 1.0, 1.0, 1.0])
        fit = identifynd.recover_intensity_nd(records_3d, alpha_bad, n=3)
        assert fit.spread > 0.2


class TestNearestSourceMatrix:
    def test_zero_drift_permutation(self):
        sources = [[0.0, 0.0], [2.0, 0.0]]
        sensors = [[1.9, 0.1], [0.1, 0.1]]
        nsm = identifynd.nearest_source_matrix(sources, sensors, None)
        np.testing.assert_array_equal(nsm.matrix, [[0, 1], [1, 0]])
        assert abs(abs(nsm.determinant) - 1.0) <= 1e-12
        assert not nsm.near_singular

    def test_shared_nearest_source_column(self):
        sources = [[0.0, 0.0], [5.0, 0.0]]
        sensors = [[0.5, 0.5], [-0.5, 0.5]]
        nsm = identifynd.nearest_source_matrix(sources, sensors, None)
        np.testing.assert_array_equal(nsm.matrix, [[1, 0], [1, 0]])
        assert nsm.determinant == 0.0
        assert nsm.near_singular

    def test_constant_drift_line_integral(self):
        drift = model.DriftFieldND.from_constant([1.0, 0.0])
        nsm = identifynd.nearest_source_matrix([[1.0, 0.0]], [[0.0, 0.0]],
                                               drift)
        np.testing.assert_allclose(nsm.matrix[0, 0], np.exp(-0.5),
                                   rtol=1e-12)

    def test_rectangular_skips_determinant(self):
        nsm = identifynd.nearest_source_matrix(
            [[0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]], None)
        assert nsm.determinant is None and nsm.near_singular is None


class TestSensorCountSufficiency:
    @pytest.mark.parametrize("r,s,n,want", [
        (2, 7, 3, True), (2, 6, 3, False), (1, 3, 2, True),
        (1, 2, 2, False), (3, 6, 2, False), (3, 7, 2, True)])
    def test_bounds(self, r, s, n, want):
        assert identifynd.sensor_count_sufficient(r, s, n) is want

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            identifynd.sensor_count_sufficient(1, 5, 1)


class TestNonuniquenessConfigurations:
    def test_mirror_pair_cancels_on_bisector(self):
        rep = identifynd.nonuniqueness_discrepancy(1, a=1.0, m_dist=3.0)
        assert rep.max_discrepancy <= 1e-14 * rep.reference

    def test_mirror_pair_plane_case(self):
        rep = identifynd.nonuniqueness_discrepancy(1, a=0.7, n=2)
        assert rep.max_discrepancy <= 1e-13 * rep.reference

    def test_paired_sources_axis_probes(self):
        rep = identifynd.nonuniqueness_discrepancy(2, a=1.0, m_dist=3.0)
        assert rep.max_discrepancy <= 1e-13 * rep.reference

    def test_generic_seventh_probe_separates(self):
        base = identifynd.nonuniqueness_discrepancy(2, a=1.0, m_dist=3.0)
        extra = identifynd.nonuniqueness_discrepancy(
            2, a=1.0, m_dist=3.0,
            probes=np.array([[1.0, 2.0, 0.0]]))
        assert extra.max_discrepancy >= 1e3 * max(base.max_discrepancy,
                                                  1e-300)

    def test_coincident_pairs_all_zero(self):
        rep = identifynd.nonuniqueness_discrepancy(2, a=0.0, m_dist=3.0)
        assert rep.max_discrepancy == 0.0

    def test_probe_on_source_rejected(self):
        with pytest.raises(ValueError):
            identifynd.nonuniqueness_discrepancy(
                1, a=1.0, probes=np.array([[1.0, 0.0, 0.0]]))
