import math

import numpy as np
import pytest

from pcquality import (
    Codec,
    DEFAULT_COEFFICIENTS,
    DegenerateFitError,
    GeometryForm,
    GroupingError,
    IncompleteDataError,
    ParameterDomainError,
    ValidationError,
    collapse_to_mean,
    estimate_content_factors,
    fit_codec_models,
    fit_condition,
    fit_linear,
    fit_log_linear,
)

import oracles
from helpers import COND_A, COND_G, COND_AG, make_sample, synthetic_samples


class TestCollapse:
    def test_mean_within_group(self):
        samples = [
            make_sample("a", "AVS", COND_A, None, 24, 4.0),
            make_sample("b", "AVS", COND_A, None, 24, 4.4),
        ]
        assert collapse_to_mean(samples) == [(8.0, pytest.approx(4.2))]

    def test_singleton(self):
        samples = [make_sample("a", "AVS", COND_G, 2, None, 5.0)]
        assert collapse_to_mean(samples) == [(2.0, 5.0)]

    def test_groups_and_sorts(self):
        samples = [
            make_sample("a", "AVS", COND_G, 4, None, 4.0),
            make_sample("b", "AVS", COND_G, 2, None, 4.8),
            make_sample("c", "AVS", COND_G, 2, None, 4.6),
        ]
        collapsed = collapse_to_mean(samples)
        assert collapsed == [(2.0, pytest.approx(4.7)), (4.0, pytest.approx(4.0))]

    def test_empty_input(self):
        assert collapse_to_mean([]) == []

    def test_mixed_conditions_rejected(self):
        samples = [
            make_sample("a", "AVS", COND_A, None, 24, 4.0),
            make_sample("a", "AVS", COND_G, 2, None, 4.0),
        ]
        with pytest.raises(GroupingError):
            collapse_to_mean(samples)

    def test_mixed_codecs_rejected(self):
        samples = [
            make_sample("a", "AVS", COND_A, None, 24, 4.0),
            make_sample("a", "GPCC", COND_A, None, 43, 4.0),
        ]
        with pytest.raises(GroupingError):
            collapse_to_mean(samples)

    def test_two_step_condition_rejected(self):
        samples = [make_sample("a", "AVS", COND_AG, 2, 24, 4.0)]
        with pytest.raises(GroupingError):
            collapse_to_mean(samples)

    def test_tolerance_clusters_near_steps(self):
        samples = [
            make_sample("a", "AVS", COND_G, 2.0, None, 4.0),
            make_sample("b", "AVS", COND_G, 2.05, None, 4.2),
            make_sample("c", "AVS", COND_G, 4.0, None, 3.0),
        ]
        assert len(collapse_to_mean(samples)) == 3
        clustered = collapse_to_mean(samples, qs_tolerance=0.1)
        assert len(clustered) == 2
        assert clustered[0] == (pytest.approx(2.025), pytest.approx(4.1))


class TestFitLinear:
    def test_exact_line_recovery(self):
        points = [(x, -0.5 * x + 5.0) for x in (1, 2, 4, 8, 16)]
        fit = fit_linear(points)
        assert fit.slope == pytest.approx(-0.5, abs=1e-9)
        assert fit.intercept == pytest.approx(5.0, abs=1e-9)
        assert fit.residual_rms == pytest.approx(0.0, abs=1e-9)
        assert fit.n_points == 5

    def test_constant_data(self):
        fit = fit_linear([(1, 4), (2, 4), (3, 4)])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)
        assert fit.intercept == pytest.approx(4.0, abs=1e-12)

    def test_hand_computed_ols(self):
        fit = fit_linear([(1, 5), (2, 3), (3, 2)])
        assert fit.slope == pytest.approx(-1.5, abs=1e-12)
        assert fit.intercept == pytest.approx(6.3333, abs=1e-4)
        assert fit.intercept == pytest.approx(19 / 3, abs=1e-12)

    def test_matches_uncentered_normal_equations(self):
        rng = np.random.default_rng(21)
        points = [(float(x), float(y)) for x, y in rng.normal(5, 2, size=(40, 2))]
        fit = fit_linear(points)
        slope, intercept = oracles.ols_brute(points)
        assert fit.slope == pytest.approx(slope, abs=1e-9)
        assert fit.intercept == pytest.approx(intercept, abs=1e-9)

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateFitError):
            fit_linear([(1.0, 2.0)])
        with pytest.raises(DegenerateFitError):
            fit_linear([(2.0, 3.0), (2.0, 5.0)])

    def test_perturbing_optimum_never_improves(self):
        rng = np.random.default_rng(22)
        x = rng.uniform(1, 50, size=12)
        y = -0.3 * x + 4 + rng.normal(0, 0.2, size=12)
        points = list(zip(x.tolist(), y.tolist()))
        fit = fit_linear(points)

        def ssr(slope, intercept):
            return math.fsum((yy - (slope * xx + intercept)) ** 2 for xx, yy in points)

        best = ssr(fit.slope, fit.intercept)
        for ds in (-1e-3, 0.0, 1e-3):
            for di in (-1e-3, 0.0, 1e-3):
                if ds == di == 0.0:
                    continue
                assert ssr(fit.slope + ds, fit.intercept + di) >= best - 1e-12

    def test_shift_equivariance(self):
        rng = np.random.default_rng(23)
        points = [(float(x), float(y)) for x, y in rng.normal(3, 1, size=(15, 2))]
        shifted = [(x, y + 2.75) for x, y in points]
        base = fit_linear(points)
        moved = fit_linear(shifted)
        assert moved.slope == pytest.approx(base.slope, abs=1e-12)
        assert moved.intercept == pytest.approx(base.intercept + 2.75, abs=1e-12)


class TestFitLogLinear:
    def test_exact_recovery_of_log_model(self):
        points = [(x, -0.559 * math.log(x) + 5.4165) for x in (1, 2, 8, 25, 64, 228)]
        fit = fit_log_linear(points)
        assert fit.slope == pytest.approx(-0.559, abs=1e-9)
        assert fit.intercept == pytest.approx(5.4165, abs=1e-9)
        assert fit.geometry_form is GeometryForm.NATURAL_LOG

    def test_exponential_abscissae(self):
        points = [(1.0, 5.0), (math.e, 4.0), (math.e ** 2, 3.0)]
        fit = fit_log_linear(points)
        assert fit.slope == pytest.approx(-1.0, abs=1e-9)
        assert fit.intercept == pytest.approx(5.0, abs=1e-9)

    def test_rejects_nonpositive_x(self):
        with pytest.raises(ParameterDomainError):
            fit_log_linear([(0.0, 1.0), (2.0, 2.0)])
        with pytest.raises(ParameterDomainError):
            fit_log_linear([(-1.0, 1.0), (2.0, 2.0)])

    def test_single_distinct_x_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_log_linear([(3.0, 1.0), (3.0, 2.0)])


class TestContentFactors:
    def test_perfect_fit_gives_zero_factors(self):
        samples = synthetic_samples("AVS", conditions=(COND_A,), with_offsets=False)
        fit = fit_condition(samples)
        for factor in fit.factors:
            assert factor.c == pytest.approx(0.0, abs=1e-9)

    def test_recovers_synthetic_offsets(self):
        samples = synthetic_samples("GPCC", conditions=(COND_G,), with_offsets=True)
        fit = fit_condition(samples)
        recovered = {f.content_id: f.c for f in fit.factors}
        assert recovered["amaryllis"] == pytest.approx(-0.2, abs=1e-9)
        assert recovered["ember"] == pytest.approx(0.2, abs=1e-9)

    def test_factors_sum_to_zero(self):
        samples = synthetic_samples("VPCC", conditions=(COND_A,), noise=0.1, seed=5)
        fit = fit_condition(samples)
        assert math.fsum(f.c for f in fit.factors) == pytest.approx(0.0, abs=1e-9)

    def test_single_content_absorbs_into_intercept(self):
        samples = [
            make_sample("solo", "AVS", COND_G, step, None, 5.5 - 0.1 * step)
            for step in (2, 4, 8)
        ]
        factors = estimate_content_factors(samples, fit_condition(samples))
        assert len(factors) == 1
        assert factors[0].c == pytest.approx(0.0, abs=1e-9)


class TestCollapseConsistency:
    def test_balanced_design_collapsed_equals_raw(self):
        samples = synthetic_samples("AVS", conditions=(COND_A,), noise=0.2, seed=31)
        collapsed_fit = fit_linear(collapse_to_mean(samples))
        raw_points = [
            (oracles.avs_attr_step(s.params.attr_param), s.mos) for s in samples
        ]
        raw_fit = fit_linear(raw_points)
        assert collapsed_fit.slope == pytest.approx(raw_fit.slope, abs=1e-12)
        assert collapsed_fit.intercept == pytest.approx(raw_fit.intercept, abs=1e-12)


class TestFitCodecModels:
    @pytest.mark.parametrize("codec", ["VPCC", "GPCC", "AVS"])
    def test_noiseless_round_trip(self, codec):
        samples = synthetic_samples(codec, conditions=(COND_A, COND_G))
        fitted = fit_codec_models(samples)
        defaults = DEFAULT_COEFFICIENTS[Codec.parse(codec)]
        assert fitted.c1_a == pytest.approx(defaults.c1_a, abs=1e-9)
        assert fitted.c2_a == pytest.approx(defaults.c2_a, abs=1e-9)
        assert fitted.c1_g == pytest.approx(defaults.c1_g, abs=1e-9)
        assert fitted.c2_g == pytest.approx(defaults.c2_g, abs=1e-9)
        assert fitted.geometry_form is defaults.geometry_form

    @pytest.mark.parametrize("codec", ["VPCC", "GPCC", "AVS"])
    def test_noisy_recovery_within_tolerance(self, codec):
        # 25 points per condition: 5 contents x 5 grid levels, sigma = 0.05
        samples = synthetic_samples(
            codec, conditions=(COND_A, COND_G), noise=0.05, seed=404
        )
        fitted = fit_codec_models(samples)
        defaults = DEFAULT_COEFFICIENTS[Codec.parse(codec)]
        assert fitted.c1_a == pytest.approx(defaults.c1_a, abs=0.02)
        assert fitted.c1_g == pytest.approx(defaults.c1_g, abs=0.02)

    def test_ignores_dual_lossy_group(self):
        with_extra = synthetic_samples("AVS")
        separate_only = synthetic_samples("AVS", conditions=(COND_A, COND_G))
        a = fit_codec_models(with_extra)
        b = fit_codec_models(separate_only)
        assert (a.c1_a, a.c2_a, a.c1_g, a.c2_g) == (b.c1_a, b.c2_a, b.c1_g, b.c2_g)

    def test_missing_group_names_condition(self):
        samples = synthetic_samples("GPCC", conditions=(COND_A,))
        with pytest.raises(IncompleteDataError, match="lossyG_losslessA"):
            fit_codec_models(samples)
        samples = synthetic_samples("GPCC", conditions=(COND_G,))
        with pytest.raises(IncompleteDataError, match="losslessG_lossyA"):
            fit_codec_models(samples)

    def test_mixed_codecs_rejected(self):
        mixed = synthetic_samples("AVS", conditions=(COND_A, COND_G)) + synthetic_samples(
            "GPCC", conditions=(COND_A, COND_G)
        )
        with pytest.raises(GroupingError):
            fit_codec_models(mixed)

    def test_empty_rejected(self):
        with pytest.raises(IncompleteDataError):
            fit_codec_models([])


class TestAnnotatedSampleInvariants:
    def test_codec_mismatch_rejected(self):
        from pcquality import AnnotatedSample, CodecParams, CompressionCondition

        params = CodecParams(
            Codec.AVS, CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR, attr_param=24
        )
        with pytest.raises(ValidationError):
            AnnotatedSample("x", Codec.GPCC,
                            CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR, params, 3.0)
