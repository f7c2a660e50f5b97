"""Tests for weighted least-squares fitting and inverse problems."""

import numpy as np
import pytest

from perflaw import (
    DEFAULT_WEIGHTS,
    DenseArch,
    DomainError,
    MoeArch,
    RegressionWeights,
    ResidualFlag,
    SingularDesignError,
    TrainingSpec,
    UnsupportedWeightsError,
    build_sample,
    contamination_check,
    fit,
    infer_gamma,
    predict_dense,
)
from perflaw.calibration import FEATURE_NAMES, FitSample


def random_dense_config(rng):
    arch = DenseArch(
        n_layers=int(rng.integers(4, 160)),
        hidden_size=int(rng.integers(512, 32768)),
        ffn_size=int(rng.integers(1024, 80000)),
        param_count=float(rng.uniform(0.5, 800)),
        gamma=float(rng.uniform(0, 2.5)),
    )
    return arch, TrainingSpec(float(rng.uniform(0.2, 25)))


def synthesize_samples(weights, count, rng, noise=0.0):
    samples = []
    while len(samples) < count:
        arch, train = random_dense_config(rng)
        try:
            raw = predict_dense(arch, train, weights).raw_score
        except DomainError:
            continue
        target = raw + noise * rng.normal()
        if not 0 < target < 100:
            continue
        samples.append(build_sample(arch, train, target, weight=float(rng.uniform(0.5, 4))))
    return samples


class TestBuildSample:
    def test_features_match_prediction(self):
        arch = DenseArch(32, 4096, 14336, 7)
        train = TrainingSpec(3)
        sample = build_sample(arch, train, observed=60.1)
        recon = float(np.sum(DEFAULT_WEIGHTS.coeffs() * sample.features) + DEFAULT_WEIGHTS.b)
        assert recon == pytest.approx(60.13969302998589, rel=1e-12)

    def test_moe_arch_accepted(self):
        moe = MoeArch(56, 6144, 16384, 141, 39, 16384)
        sample = build_sample(moe, TrainingSpec(10), observed=77.8, weight=2.0)
        assert sample.weight == 2.0
        assert sample.features.shape == (4,)

    def test_rejects_out_of_range_scores(self):
        arch = DenseArch(32, 4096, 14336, 7)
        for bad in (0.0, -3.0, 100.0, 140.0):
            with pytest.raises(DomainError):
                build_sample(arch, TrainingSpec(3), observed=bad)

    def test_rejects_nonpositive_weight(self):
        arch = DenseArch(32, 4096, 14336, 7)
        with pytest.raises(DomainError):
            build_sample(arch, TrainingSpec(3), observed=60.0, weight=0.0)


class TestFit:
    def test_noiseless_round_trip_recovers_defaults(self):
        rng = np.random.default_rng(42)
        samples = synthesize_samples(DEFAULT_WEIGHTS, 24, rng)
        report = fit(samples)
        fitted = report.weights
        for got, want in zip(
            (fitted.w1, fitted.w2, fitted.w3, fitted.w4, fitted.b),
            (13.95018, 0.23072, -0.48523, 5.39802, 9.19541),
        ):
            assert got == pytest.approx(want, abs=1e-6)
        assert report.mae < 1e-8
        assert report.pearson_r == pytest.approx(1.0, abs=1e-9)

    def test_round_trip_on_other_weights(self):
        rng = np.random.default_rng(3)
        truth = RegressionWeights(4.0, -2.0, 1.25, 7.5, -20.0)
        samples = synthesize_samples(truth, 40, rng)
        fitted = fit(samples).weights
        assert np.allclose(
            [fitted.w1, fitted.w2, fitted.w3, fitted.w4, fitted.b],
            [truth.w1, truth.w2, truth.w3, truth.w4, truth.b],
            atol=1e-6,
        )

    def test_residuals_are_weight_orthogonal_to_design(self):
        rng = np.random.default_rng(9)
        samples = synthesize_samples(DEFAULT_WEIGHTS, 30, rng, noise=4.0)
        report = fit(samples)
        design = np.column_stack(
            [np.vstack([s.features for s in samples]), np.ones(len(samples))]
        )
        w = np.array([s.weight for s in samples])
        projections = design.T @ (w * report.residuals)
        assert np.all(np.abs(projections) < 1e-6)

    def test_doubling_weights_changes_nothing(self):
        rng = np.random.default_rng(15)
        samples = synthesize_samples(DEFAULT_WEIGHTS, 16, rng, noise=2.0)
        doubled = [FitSample(s.features, s.target, 2 * s.weight) for s in samples]
        a, b = fit(samples).weights, fit(doubled).weights
        assert np.allclose(
            [a.w1, a.w2, a.w3, a.w4, a.b], [b.w1, b.w2, b.w3, b.w4, b.b], atol=1e-7
        )

    def test_needs_five_samples(self):
        rng = np.random.default_rng(1)
        samples = synthesize_samples(DEFAULT_WEIGHTS, 4, rng)
        with pytest.raises(DomainError):
            fit(samples)

    def test_identical_samples_are_singular(self):
        sample = build_sample(DenseArch(32, 4096, 14336, 7), TrainingSpec(3), 60.0)
        with pytest.raises(SingularDesignError) as exc_info:
            fit([sample] * 6)
        assert exc_info.value.code == "RANK_DEFICIENT"
        # the message names offending feature columns
        assert any(name in str(exc_info.value) for name in FEATURE_NAMES)

    def test_report_serialization_fields(self):
        rng = np.random.default_rng(2)
        report = fit(synthesize_samples(DEFAULT_WEIGHTS, 8, rng))
        payload = report.to_json_dict()
        assert set(payload) == {"weights", "residuals", "mae", "pearson_r"}
        assert set(payload["weights"]) == {"w1", "w2", "w3", "w4", "b"}
        assert len(payload["residuals"]) == 8


class TestInferGamma:
    def test_round_trip_100_random_configs(self):
        rng = np.random.default_rng(123)
        checked = 0
        while checked < 100:
            arch, train = random_dense_config(rng)
            try:
                observed = predict_dense(arch, train).raw_score
            except DomainError:
                continue  # discount underflow for extreme draws
            estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, observed)
            assert estimate.feasible
            assert estimate.gamma == pytest.approx(arch.gamma, abs=1e-9)
            checked += 1

    def test_boundary_gamma_zero(self):
        arch = DenseArch(80, 8192, 28672, 70)
        train = TrainingSpec(2)
        score0 = predict_dense(DenseArch(80, 8192, 28672, 70, gamma=0.0), train).raw_score
        estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, score0)
        assert estimate.feasible and estimate.gamma == 0.0

    def test_infeasible_above_gamma_zero_score(self):
        arch = DenseArch(80, 8192, 28672, 70)
        estimate = infer_gamma(arch, TrainingSpec(2), DEFAULT_WEIGHTS, observed=99.0)
        assert not estimate.feasible
        assert estimate.gamma is None

    def test_uses_raw_scale_not_adjusted(self):
        # A config whose raw score exceeds 90: inversion must happen on the
        # raw scale, where the score is affine in gamma^2.
        arch = DenseArch(200, 32768, 65536, 1760, gamma=1.3)
        train = TrainingSpec(11)
        observed = predict_dense(arch, train).raw_score
        assert observed > 90
        estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, observed)
        assert estimate.gamma == pytest.approx(1.3, abs=1e-9)

    def test_rejects_nonpositive_coefficient_sum(self):
        arch = DenseArch(32, 4096, 14336, 7)
        bad = RegressionWeights(-5.0, -1.0, -0.5, -3.0, 9.0)
        with pytest.raises(UnsupportedWeightsError):
            infer_gamma(arch, TrainingSpec(3), bad, observed=50.0)

    def test_unhealthy_precision_detected(self):
        # An observed score far below plan implies a large gamma: a run
        # inferring ~3.7 on a stack expected to sit near 1 is unhealthy.
        arch = DenseArch(80, 8192, 28672, 70, gamma=3.7)
        train = TrainingSpec(15)
        observed = predict_dense(arch, train).raw_score
        estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, observed)
        assert estimate.gamma == pytest.approx(3.7, abs=1e-9)
        assert estimate.gamma > 3.0


class TestContaminationCheck:
    def test_flags(self):
        assert contamination_check(60, 80) is ResidualFlag.CONTAMINATION_SUSPECT
        assert contamination_check(60, 60) is ResidualFlag.OK
        assert contamination_check(80, 60) is ResidualFlag.UNDERPERFORMANCE

    def test_threshold_is_strict(self):
        assert contamination_check(60, 70, threshold=10.0) is ResidualFlag.OK
        assert contamination_check(60, 70.01, threshold=10.0) is ResidualFlag.CONTAMINATION_SUSPECT

    def test_custom_threshold(self):
        assert contamination_check(60, 64, threshold=3.0) is ResidualFlag.CONTAMINATION_SUSPECT
        assert contamination_check(60, 64, threshold=5.0) is ResidualFlag.OK
