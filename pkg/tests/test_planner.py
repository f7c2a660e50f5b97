"""Tests for sweeps, architecture search, and expansion planning."""

from dataclasses import replace

import pytest

from perflaw import (
    DenseArch,
    DomainError,
    ExpansionPlan,
    GIANT_MOE_ARCH,
    GIANT_MOE_TRAINING,
    IntRange,
    MoeArch,
    RatioRange,
    SearchConstraints,
    SweepSpec,
    TrainingSpec,
    estimate_param_count,
    expansion_ratio,
    expansion_split_curve,
    giant_projection,
    optimize_expansion_split,
    predict_dense,
    predict_expanded,
    predict_moe,
    search_architectures,
    sweep,
)

SMALL_7B = DenseArch(32, 4096, 14336, 7)
LARGE_70B = DenseArch(80, 8192, 28672, 70)


class TestSweep:
    def test_two_steps_are_exactly_the_endpoints(self):
        spec = SweepSpec("gamma", 1.0, 3.0, 2, LARGE_70B, TrainingSpec(15))
        points = sweep(spec)
        assert [x for x, _ in points] == [1.0, 3.0]
        assert points[0][1] == predict_dense(replace(LARGE_70B, gamma=1.0),
                                             TrainingSpec(15)).adjusted_score

    def test_gamma_sweep_strictly_decreasing_for_each_depth(self):
        for depth in (32, 48, 64, 80):
            arch = DenseArch(depth, 8192, 28672, 70)
            scores = [s for _, s in sweep(SweepSpec("gamma", 1.0, 3.0, 9, arch, TrainingSpec(15)))]
            assert all(a > b for a, b in zip(scores, scores[1:])), depth

    def test_token_sweep_strictly_increasing_below_capacity(self):
        spec = SweepSpec("tokens", 0.5, 7.0, 10, SMALL_7B, TrainingSpec(1))
        scores = [s for _, s in sweep(spec)]
        assert all(a < b for a, b in zip(scores, scores[1:]))

    def test_layer_sweep_rounds_to_integers(self):
        spec = SweepSpec("n_layers", 30, 40, 5, SMALL_7B, TrainingSpec(3))
        points = sweep(spec)
        assert [x for x, _ in points] == [30.0, 32.0, 35.0, 38.0, 40.0]
        x, score = points[1]
        assert score == predict_dense(replace(SMALL_7B, n_layers=32),
                                      TrainingSpec(3)).adjusted_score

    def test_moe_base_supported(self):
        moe = MoeArch(56, 6144, 16384, 141, 39, 16384)
        points = sweep(SweepSpec("gamma", 0.5, 2.5, 5, moe, TrainingSpec(10)))
        scores = [s for _, s in points]
        assert all(a > b for a, b in zip(scores, scores[1:]))

    def test_invalid_specs_rejected(self):
        with pytest.raises(DomainError):
            SweepSpec("depth", 1, 3, 5, SMALL_7B, TrainingSpec(3))
        with pytest.raises(DomainError):
            SweepSpec("gamma", 3, 1, 5, SMALL_7B, TrainingSpec(3))
        with pytest.raises(DomainError):
            SweepSpec("gamma", 1, 3, 1, SMALL_7B, TrainingSpec(3))
        with pytest.raises(DomainError):
            SweepSpec("tokens", 0, 3, 5, SMALL_7B, TrainingSpec(3))

    def test_deterministic(self):
        spec = SweepSpec("gamma", 1, 3, 17, LARGE_70B, TrainingSpec(15))
        assert sweep(spec) == sweep(spec)


class TestGiantProjection:
    def test_preset_value(self):
        assert giant_projection() == pytest.approx(94.77, abs=0.5)
        assert giant_projection() == pytest.approx(94.77037028865819, rel=1e-12)

    def test_adjustment_active(self):
        raw = predict_moe(GIANT_MOE_ARCH, GIANT_MOE_TRAINING).raw_score
        assert raw > 90
        assert giant_projection() < raw

    def test_monotone_in_gamma_around_preset(self):
        at_1 = predict_moe(replace(GIANT_MOE_ARCH, gamma=1.0), GIANT_MOE_TRAINING).adjusted_score
        at_3 = predict_moe(replace(GIANT_MOE_ARCH, gamma=3.0), GIANT_MOE_TRAINING).adjusted_score
        assert at_1 > giant_projection() > at_3


class TestSearch:
    def test_singleton_grid_returns_that_arch(self):
        constraints = SearchConstraints(
            max_params=10, token_budget=5,
            layer_range=IntRange(32, 32), hidden_range=IntRange(4096, 4096),
            ffn_range=IntRange(14336, 14336),
        )
        hits = search_architectures(constraints)
        assert len(hits) == 1
        assert (hits[0].arch.n_layers, hits[0].arch.hidden_size, hits[0].arch.ffn_size) == \
            (32, 4096, 14336)

    def test_top_k_truncates_but_never_pads(self):
        constraints = SearchConstraints(
            max_params=10, token_budget=5,
            layer_range=IntRange(30, 32, 2), hidden_range=IntRange(4096, 4096),
            ffn_range=IntRange(14336, 14336),
        )
        assert len(search_architectures(constraints, top_k=3)) == 2
        assert len(search_architectures(constraints, top_k=1)) == 1

    def test_in_grid_reference_shape_is_a_lower_bound(self):
        # The 8 B-class reference shape is inside this grid, so the best
        # hit can never score below it.
        constraints = SearchConstraints(
            max_params=8.0, token_budget=15.0,
            layer_range=IntRange(24, 40, 8),
            hidden_range=IntRange(3072, 4096, 1024),
            ffn_range=IntRange(8192, 14336, 2048),
            vocab_size=0,
        )
        hits = search_architectures(constraints, top_k=1)
        est = estimate_param_count(32, 4096, 14336, vocab_size=0)
        assert est <= 8.0
        reference = predict_dense(DenseArch(32, 4096, 14336, est), TrainingSpec(15.0))
        assert hits[0].score >= reference.adjusted_score

    def test_budget_never_violated(self):
        constraints = SearchConstraints(
            max_params=3.0, token_budget=8.0,
            layer_range=IntRange(8, 64, 8),
            hidden_range=IntRange(1024, 6144, 1024),
            ffn_range=IntRange(2048, 16384, 2048),
        )
        hits = search_architectures(constraints, top_k=1000)
        assert hits
        assert all(h.est_params <= 3.0 for h in hits)

    def test_ranked_by_score_descending(self):
        constraints = SearchConstraints(
            max_params=8.0, token_budget=15.0,
            layer_range=IntRange(16, 40, 8),
            hidden_range=IntRange(2048, 4096, 1024),
            ffn_range=IntRange(4096, 16384, 4096),
        )
        hits = search_architectures(constraints, top_k=50)
        scores = [h.score for h in hits]
        assert scores == sorted(scores, reverse=True)
        assert hits == search_architectures(constraints, top_k=50)  # deterministic

    def test_moe_candidates_fill_the_budget(self):
        constraints = SearchConstraints(
            max_params=47.0, token_budget=8.0,
            layer_range=IntRange(32, 32), hidden_range=IntRange(4096, 4096),
            ffn_range=IntRange(14336, 14336),
            moe=RatioRange(0.25, 0.5, 2),
        )
        hits = search_architectures(constraints, top_k=10)
        moes = [h.arch for h in hits if isinstance(h.arch, MoeArch)]
        assert len(moes) == 2
        assert all(m.total_params == 47.0 for m in moes)
        assert sorted(m.active_params for m in moes) == [11.75, 23.5]
        assert all(m.expert_ffn_size == m.ffn_size for m in moes)

    def test_empty_feasible_set(self):
        constraints = SearchConstraints(
            max_params=0.001, token_budget=5,
            layer_range=IntRange(32, 32), hidden_range=IntRange(4096, 4096),
            ffn_range=IntRange(14336, 14336),
        )
        assert search_architectures(constraints) == []

    def test_range_validation(self):
        with pytest.raises(DomainError):
            IntRange(10, 5)
        with pytest.raises(DomainError):
            IntRange(0, 5)
        with pytest.raises(DomainError):
            RatioRange(0.0, 0.5, 3)
        with pytest.raises(DomainError):
            RatioRange(0.2, 0.5, 1)
        with pytest.raises(DomainError):
            SearchConstraints(
                max_params=-1, token_budget=5,
                layer_range=IntRange(1, 2), hidden_range=IntRange(1, 2),
                ffn_range=IntRange(1, 2),
            )


class TestPredictExpanded:
    def test_reference_plan_value(self):
        plan = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 1.0)
        result = predict_expanded(plan)
        assert result.raw_score == pytest.approx(67.00187378584985, rel=1e-12)
        assert expansion_ratio(plan) == pytest.approx(0.3249863806393893, rel=1e-12)
        assert result.effective_tokens == 4.0
        assert not result.token_clipped

    def test_no_saturation_clip_on_total_tokens(self):
        # 3 + 9 = 12 T total on a 7 B small -> 70 B plan: a plain dense
        # prediction would clip, the expansion path must not.
        plan = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 9.0)
        assert predict_expanded(plan).effective_tokens == 12.0

    def test_degenerate_plan_equals_plain_prediction(self):
        plan = ExpansionPlan(SMALL_7B, 2.0, SMALL_7B, 3.0)
        expanded = predict_expanded(plan)
        plain = predict_dense(SMALL_7B, TrainingSpec(5.0))
        assert expanded.raw_score == pytest.approx(plain.raw_score, abs=1e-6)

    def test_ratio_limits(self):
        # late expansion budget dominates: ratio -> 1
        late = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 1e6)
        assert expansion_ratio(late) == pytest.approx(1.0, abs=1e-4)
        # immediate scoring after expansion: recovery penalty at half strength
        early = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 1e-9)
        s1, s2, t1 = 7.0, 70.0, 3.0
        blend = (s1 * t1 + s2 * 1e-9) / ((t1 + 1e-9) * s2)
        assert expansion_ratio(early) == pytest.approx(blend - t1 * s1 / (2 * s2), abs=1e-6)

    def test_gamma_comes_from_the_large_arch(self):
        sloppy = ExpansionPlan(SMALL_7B, 3.0, replace(LARGE_70B, gamma=2.5), 1.0)
        clean = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 1.0)
        assert predict_expanded(sloppy).raw_score < predict_expanded(clean).raw_score
        dirty_small = ExpansionPlan(replace(SMALL_7B, gamma=9.0), 3.0, LARGE_70B, 1.0)
        assert predict_expanded(dirty_small).raw_score == \
            pytest.approx(predict_expanded(clean).raw_score, rel=1e-12)

    def test_nonpositive_effective_dims_rejected(self):
        # A near-zero recovery window drives the ratio negative; with an
        # extreme layer growth that sends effective depth below zero.
        plan = ExpansionPlan(SMALL_7B, 3.0, DenseArch(3200, 8192, 28672, 70), 0.001)
        assert expansion_ratio(plan) < 0
        with pytest.raises(DomainError):
            predict_expanded(plan)

    def test_plan_validation(self):
        with pytest.raises(DomainError):
            ExpansionPlan(SMALL_7B, 0.0, LARGE_70B, 1.0)
        with pytest.raises(DomainError):
            ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, -1.0)
        with pytest.raises(DomainError):  # shrinking a dimension
            ExpansionPlan(LARGE_70B, 3.0, SMALL_7B, 1.0)
        with pytest.raises(DomainError):
            ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 1.0, recovery_scale=0.0)

    def test_huge_recovery_exponent_does_not_overflow(self):
        plan = ExpansionPlan(SMALL_7B, 3.0, LARGE_70B, 500.0)
        assert expansion_ratio(plan) == pytest.approx(
            (7 * 3 + 70 * 500) / (503 * 70), rel=1e-12
        )


class TestExpansionSplit:
    def test_grid_cardinality_and_interior_points(self):
        curve = expansion_split_curve(SMALL_7B, LARGE_70B, 4.0, grid=3)
        assert len(curve) == 3
        assert [t1 for t1, _, _ in curve] == [1.0, 2.0, 3.0]
        assert all(0 < t1 < 4 and t1 + t2 == 4.0 for t1, t2, _ in curve)

    def test_tiny_budget_expands_immediately(self):
        # No time to pretrain the small model: best split is the smallest
        # T1 on the grid.
        curve = expansion_split_curve(SMALL_7B, LARGE_70B, 0.2, grid=41)
        best = optimize_expansion_split(SMALL_7B, LARGE_70B, 0.2, grid=41)
        assert best.small_tokens == curve[0][0]
        assert best.score == max(s for _, _, s in curve)

    def test_layer_growth_has_interior_optimum(self):
        # Depth-dominated growth: too-early expansion wastes the budget at
        # extreme depth (instability discount), too-late loses the depth
        # gain. The best expansion point is strictly inside the grid.
        small = DenseArch(32, 8192, 28672, 7)
        large = DenseArch(512, 8192, 28672, 70)
        curve = expansion_split_curve(small, large, 4.0, grid=41)
        scores = [s for _, _, s in curve]
        best_index = scores.index(max(scores))
        assert 0 < best_index < len(curve) - 1
        best = optimize_expansion_split(small, large, 4.0, grid=41)
        assert best.small_tokens == curve[best_index][0]

    def test_ties_resolve_to_smaller_t1(self):
        # With small == large every split scores identically, so the
        # optimizer must return the first grid point.
        curve = expansion_split_curve(SMALL_7B, SMALL_7B, 2.0, grid=11)
        assert len({s for _, _, s in curve}) == 1
        best = optimize_expansion_split(SMALL_7B, SMALL_7B, 2.0, grid=11)
        assert best.small_tokens == curve[0][0]

    def test_validation(self):
        with pytest.raises(DomainError):
            expansion_split_curve(SMALL_7B, LARGE_70B, 0.0, grid=41)
        with pytest.raises(DomainError):
            expansion_split_curve(SMALL_7B, LARGE_70B, 4.0, grid=2)
