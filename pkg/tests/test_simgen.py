import numpy as np
import pytest

from funcward import (
    Ar2Source,
    ArtifactSpec,
    ExperimentConfig,
    TimeSeries,
    apply_artifact,
    ar2_coeffs,
    ar2_true_log_sdf,
    eeg_spectral_sets,
    generate_eeg_clusters,
    generate_model,
    simulate_ar2,
    smooth_log_periodogram,
)
from funcward.simgen import (
    CLUSTER_WEIGHTS,
    DEFAULT_SOURCES,
    EEG_MAX_FREQUENCY,
    gp_covariance_root,
)


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig()
        assert (cfg.m, cfg.curves_per_cluster, cfg.p_true, cfg.T) == (20, 30, 4, 200)

    def test_true_labels_blocked(self):
        cfg = ExperimentConfig(m=8, p_true=4)
        assert [cfg.true_label(i) for i in range(8)] == [1, 1, 2, 2, 3, 3, 4, 4]

    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(m=10, p_true=4)
        with pytest.raises(ValueError):
            ExperimentConfig(c=1.0)
        with pytest.raises(ValueError):
            ExperimentConfig(c=-0.1)
        with pytest.raises(ValueError):
            ExperimentConfig(T=1)


class TestGpCovarianceRoot:
    def test_reproduces_covariance(self):
        t = np.linspace(0, 1, 50)
        cov = np.exp(-np.abs(np.subtract.outer(t, t)))
        root = gp_covariance_root(cov)
        assert np.allclose(root @ root, cov, atol=1e-10)

    def test_clips_negative_eigenvalues(self):
        t = np.linspace(0, 1, 80)
        cov = 8.0 * np.exp(-np.abs(np.subtract.outer(t, t)) ** 0.2)
        root = gp_covariance_root(cov)
        assert np.all(np.isfinite(root))
        assert np.allclose(root @ root, cov, atol=1e-6)

    def test_sample_covariance_matches(self):
        # marginal variance 1 everywhere; cov(e(0.2), e(0.4)) = exp(-0.2)
        t = np.linspace(0, 1, 11)
        cov = np.exp(-np.abs(np.subtract.outer(t, t)))
        root = gp_covariance_root(cov)
        rng = np.random.default_rng(0)
        draws = rng.standard_normal((2000, 11)) @ root.T
        i, j = 2, 4  # t = 0.2 and t = 0.4
        sample_cov = np.cov(draws[:, i], draws[:, j])
        assert abs(sample_cov[0, 0] - 1.0) < 0.1
        assert abs(sample_cov[0, 1] - np.exp(-0.2)) < 0.1


class TestGenerateModel:
    def test_layout_and_determinism(self):
        cfg = ExperimentConfig(m=8, curves_per_cluster=5, p_true=4, c=0.3, seed=11)
        a = generate_model(1, cfg)
        b = generate_model(1, cfg)
        assert len(a.sets) == 8
        assert all(len(s) == 5 for s in a.sets)
        assert a.true_labels == (1, 1, 2, 2, 3, 3, 4, 4)
        for sa, sb in zip(a.sets, b.sets):
            assert np.array_equal(sa.values, sb.values)
        assert a.contaminated == b.contaminated

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError):
            generate_model(4, ExperimentConfig())

    def test_clean_cluster_means_track_trend(self):
        # pointwise mean over many replicate curves approaches k + 2kt
        cfg = ExperimentConfig(m=4, curves_per_cluster=500, p_true=4, c=0.0,
                               T=50, seed=1)
        data = generate_model(1, cfg)
        t = data.grid.points
        for cs, k in zip(data.sets, data.true_labels):
            assert np.max(np.abs(cs.values.mean(axis=0) - (k + 2 * k * t))) < 0.15

    def test_model1_offset_is_plus_minus_eight(self):
        base = generate_model(1, ExperimentConfig(m=4, curves_per_cluster=25,
                                                  c=0.0, seed=3))
        dirty = generate_model(1, ExperimentConfig(m=4, curves_per_cluster=25,
                                                   c=0.999999, seed=3))
        diff = dirty.sets[0].values - base.sets[0].values
        per_curve = np.unique(np.round(diff, 9), axis=1)
        assert per_curve.shape[1] == 1  # constant offset per curve
        assert set(np.abs(per_curve.ravel())) == {8.0}

    def test_model2_offset_is_shape_bump(self):
        cfg_clean = ExperimentConfig(m=4, curves_per_cluster=10, c=0.0, seed=4)
        cfg_dirty = ExperimentConfig(m=4, curves_per_cluster=10, c=0.999999, seed=4)
        base = generate_model(2, cfg_clean)
        dirty = generate_model(2, cfg_dirty)
        t = base.grid.points
        g = 30.0 * t**1.5 * (1.0 - t)
        diff = dirty.sets[0].values - base.sets[0].values
        for row in diff:
            assert np.allclose(np.abs(row), g, atol=1e-9)
        j = np.argmin(np.abs(t - 0.6))
        assert abs(np.abs(diff[0, j]) - 5.577096) < 1e-3

    def test_model3_variance_and_trend(self):
        cfg = ExperimentConfig(m=4, curves_per_cluster=400, p_true=4, c=0.999999,
                               T=50, seed=5)
        data = generate_model(3, cfg)
        t = data.grid.points
        k = data.true_labels[0]
        values = data.sets[0].values
        assert np.max(np.abs(values.mean(axis=0) - (k + 2 * k * t))) < 0.5
        pointwise_var = values.var(axis=0)
        assert 6.0 < pointwise_var.mean() < 10.0

    def test_contamination_frequency(self):
        cfg = ExperimentConfig(c=0.2, seed=6)
        flags = []
        for seed in range(5):
            data = generate_model(1, ExperimentConfig(c=0.2, seed=seed))
            flags.extend(data.contaminated.values())
        rate = np.mean(flags)
        se = np.sqrt(0.2 * 0.8 / len(flags))
        assert abs(rate - 0.2) < 3 * se

    def test_zero_contamination_flags_all_false(self):
        data = generate_model(2, ExperimentConfig(m=4, curves_per_cluster=5, c=0.0,
                                                  seed=7))
        assert not any(data.contaminated.values())


class TestAr2Coeffs:
    def test_zero_frequency(self):
        phi1, phi2 = ar2_coeffs(0.0, 1.2, 1000.0)
        assert phi1 == pytest.approx(2 / 1.2)
        assert phi2 == pytest.approx(-1 / 1.44)

    def test_reference_values(self):
        phi1, phi2 = ar2_coeffs(100.0, 1.05, 1000.0)
        assert phi1 == pytest.approx(1.54098, abs=1e-5)
        assert phi2 == pytest.approx(-0.90703, abs=1e-5)

    def test_quarter_rate_gives_zero_phi1(self):
        phi1, _ = ar2_coeffs(250.0, 1.1, 1000.0)
        assert phi1 == pytest.approx(0.0, abs=1e-15)

    def test_m_at_most_one_rejected(self):
        with pytest.raises(ValueError):
            ar2_coeffs(10.0, 1.0, 1000.0)

    def test_always_stationary(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            omega0 = float(rng.uniform(0, 499))
            M = float(rng.uniform(1.0001, 3.0))
            phi1, phi2 = ar2_coeffs(omega0, M, 1000.0)
            Ar2Source(phi1, phi2)  # validates stationarity


class TestSimulateAr2:
    def test_deterministic(self):
        src = Ar2Source(0.5, -0.3)
        a = simulate_ar2(src, 256, seed=9)
        b = simulate_ar2(src, 256, seed=9)
        assert np.array_equal(a.values, b.values)

    def test_white_noise_variance(self):
        src = Ar2Source(0.0, 0.0, sigma2=1.0)
        x = simulate_ar2(src, 5000, seed=10)
        assert abs(x.values.var() - 1.0) < 0.1

    def test_lag_one_autocorrelation(self):
        src = Ar2Source(0.6, -0.2)
        x = simulate_ar2(src, 5000, seed=11).values
        rho1 = np.corrcoef(x[:-1], x[1:])[0, 1]
        assert abs(rho1 - src.phi1 / (1 - src.phi2)) < 0.05

    def test_nonstationary_source_rejected(self):
        with pytest.raises(ValueError):
            Ar2Source(1.5, 0.2)


class TestGenerateEegClusters:
    def test_cluster1_weights_match_design(self):
        assert CLUSTER_WEIGHTS[0] == (4 / 5, 1 / 10, 0.0, 0.0, 0.0)
        assert [s.band for s in DEFAULT_SOURCES] == [
            "delta", "theta", "alpha", "beta", "gamma",
        ]

    def test_determinism_and_layout(self):
        cfg = ExperimentConfig(m=4, curves_per_cluster=3, p_true=4, c=0.5, seed=12)
        a = generate_eeg_clusters(cfg, n_t=256, artifact="eye_blink")
        b = generate_eeg_clusters(cfg, n_t=256, artifact="eye_blink")
        for ga, gb in zip(a.groups, b.groups):
            for sa, sb in zip(ga, gb):
                assert np.array_equal(sa.values, sb.values)
        assert a.contaminated == b.contaminated

    def test_zero_weight_sources_never_drawn(self):
        cfg = ExperimentConfig(m=4, curves_per_cluster=2, p_true=4, c=0.0, seed=13)
        base = generate_eeg_clusters(cfg, n_t=256)
        altered = list(DEFAULT_SOURCES)
        altered[2] = Ar2Source(0.1, -0.5, band="alpha")  # weight 0 for cluster 1
        other = generate_eeg_clusters(cfg, sources=tuple(altered), n_t=256)
        assert np.array_equal(base.groups[0][0].values, other.groups[0][0].values)
        # cluster 2 uses source 3, so its series must change
        assert not np.array_equal(base.groups[1][0].values, other.groups[1][0].values)

    def test_spectrum_tracks_mixture_density(self):
        # smoothed log-periodogram of a cluster signal stays near the log
        # of the weighted source-density mixture
        n_t = 4000
        freqs = np.arange(1, (n_t - 1) // 2 + 1) * (1000.0 / n_t)
        devs = []
        for seed in range(20):
            cfg = ExperimentConfig(m=4, curves_per_cluster=1, p_true=4, c=0.0,
                                   seed=seed)
            sim = generate_eeg_clusters(cfg, n_t=n_t)
            k = 2  # cluster index 1 -> true cluster 2
            est = smooth_log_periodogram(sim.groups[1][0])
            mix = np.zeros_like(freqs)
            for w, src in zip(CLUSTER_WEIGHTS[k - 1], DEFAULT_SOURCES):
                if w:
                    mix += w * np.exp(
                        ar2_true_log_sdf(src.phi1, src.phi2, src.sigma2, freqs, 1000.0)
                    )
            devs.append(np.mean(np.abs(est.log_values - np.log(mix))))
        assert np.mean(devs) < 0.5

    def test_wrong_source_count(self):
        with pytest.raises(ValueError):
            generate_eeg_clusters(ExperimentConfig(), sources=DEFAULT_SOURCES[:3])

    def test_unknown_artifact(self):
        with pytest.raises(ValueError):
            generate_eeg_clusters(ExperimentConfig(), artifact="chewing")


class TestApplyArtifact:
    def test_zero_amplitude_is_noop(self):
        x = TimeSeries(np.random.default_rng(14).standard_normal(500), 1000.0)
        spec = ArtifactSpec("eye_blink", amplitude=0.0, onset=0.1)
        assert np.array_equal(apply_artifact(x, spec).values, x.values)

    def test_movement_peak_at_center(self):
        x = TimeSeries(np.zeros(1000), 1000.0)
        spec = ArtifactSpec("eye_movement", amplitude=4.0, onset=0.5)
        out = apply_artifact(x, spec)
        assert out.values.max() == pytest.approx(4.0)
        assert np.argmax(out.values) == 500

    def test_blink_is_biphasic(self):
        x = TimeSeries(np.zeros(1000), 1000.0)
        spec = ArtifactSpec("eye_blink", amplitude=6.0, onset=0.1)
        wave = apply_artifact(x, spec).values
        nonzero = wave[np.abs(wave) > 1e-6 * np.abs(wave).max()]
        signs = np.sign(nonzero)
        assert (np.diff(signs) != 0).sum() == 1
        assert np.abs(wave).max() == pytest.approx(6.0)

    def test_onset_outside_series(self):
        x = TimeSeries(np.zeros(500), 1000.0)
        with pytest.raises(ValueError):
            apply_artifact(x, ArtifactSpec("eye_blink", 1.0, onset=0.8))
        with pytest.raises(ValueError):
            apply_artifact(x, ArtifactSpec("eye_movement", 1.0, onset=-0.1))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ArtifactSpec("nod", 1.0, 0.1)
        with pytest.raises(ValueError):
            ArtifactSpec("eye_blink", -1.0, 0.1)


class TestEegSpectralSets:
    def test_band_restriction_default(self):
        cfg = ExperimentConfig(m=4, curves_per_cluster=2, p_true=4, c=0.0, seed=15)
        sim = generate_eeg_clusters(cfg, n_t=512)
        sets = eeg_spectral_sets(sim)
        assert all(cs.grid.points[-1] <= EEG_MAX_FREQUENCY for cs in sets)
        full = eeg_spectral_sets(sim, max_frequency=None)
        assert full[0].grid.size == (512 - 1) // 2
        assert sets[0].ids == list(sim.ids[0])
