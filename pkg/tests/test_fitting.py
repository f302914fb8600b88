"""Fit recovery on synthetic curves, asymptotes, and holdout model ranking."""

from __future__ import annotations

import json

import numpy as np
import pytest

from metadiv.accumulation import AccumulationCurve
from metadiv.fitting import (
    InsufficientDataError,
    asymptote,
    compare_models,
    fit_model,
    fit_power_law,
)
from metadiv.models import PARAM_NAMES, ModelKind, eval_model

LOG_GRID = np.unique(np.round(np.geomspace(1, 1e5, 50)).astype(int))


def synthetic_curve(kind: ModelKind, params, ns=LOG_GRID) -> AccumulationCurve:
    values = eval_model(kind, params, ns.astype(float))
    return AccumulationCurve(
        points=tuple((int(n), float(v)) for n, v in zip(ns, values)),
        statistic="diversity",
    )


class TestPowerLawFit:
    # Published per-novel parameter pairs seed the synthetic recovery check.
    @pytest.mark.parametrize("c_true,alpha_true", [(6.7, 0.68), (6.9, 0.66), (11.1, 0.59)])
    def test_recovers_generating_parameters(self, c_true, alpha_true):
        ns = np.unique(np.round(np.geomspace(10, 1e5, 40)).astype(int))
        fit = fit_power_law(synthetic_curve(ModelKind.POWER_LAW, (c_true, alpha_true), ns))
        assert fit.params["C"] == pytest.approx(c_true, rel=1e-6)
        assert fit.params["alpha"] == pytest.approx(alpha_true, rel=1e-6)
        assert fit.residual < 1e-12
        assert fit.converged

    def test_constant_curve(self):
        curve = AccumulationCurve(points=((1, 5.0), (10, 5.0), (100, 5.0)))
        fit = fit_power_law(curve)
        assert fit.params["C"] == pytest.approx(5.0, rel=1e-12)
        assert fit.params["alpha"] == pytest.approx(0.0, abs=1e-12)

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            fit_power_law(AccumulationCurve(points=((1, 1.0), (2, 2.0))))

    def test_nonpositive_values_rejected(self):
        curve = AccumulationCurve(points=((1, 0.0), (2, 2.0), (3, 3.0)))
        with pytest.raises(ValueError):
            fit_power_law(curve)


def _random_params(kind: ModelKind, rng) -> np.ndarray:
    d = rng.uniform(2.0, 200.0)
    if kind is ModelKind.M1:
        return np.array([d, rng.uniform(1e-4, 1e-2)])
    if kind is ModelKind.M2:
        return np.array([d, rng.uniform(50.0, 2e4)])
    if kind is ModelKind.M3:
        c = rng.uniform(50.0, 2e4)
        return np.array([d, rng.uniform(0.0, 0.5 * c), c])
    return np.array([d, rng.uniform(50.0, 2e4), rng.uniform(0.2, 3.0)])


class TestSaturatingFit:
    def test_m4_noiseless_recovery(self):
        fit = fit_model(synthetic_curve(ModelKind.M4, (100.0, 5000.0, 0.8)), ModelKind.M4)
        assert fit.converged
        for name, expected in zip(("D", "c", "alpha"), (100.0, 5000.0, 0.8)):
            assert fit.params[name] == pytest.approx(expected, rel=1e-4)

    def test_m2_noiseless_recovery(self):
        fit = fit_model(synthetic_curve(ModelKind.M2, (50.0, 1000.0)), ModelKind.M2)
        assert fit.converged
        assert fit.params["D"] == pytest.approx(50.0, rel=1e-6)
        assert fit.params["c"] == pytest.approx(1000.0, rel=1e-6)

    @pytest.mark.parametrize("kind", [ModelKind.M1, ModelKind.M2, ModelKind.M3, ModelKind.M4])
    def test_random_recovery(self, kind):
        rng = np.random.default_rng(hash(kind.value) % 2**32)
        for _ in range(5):
            true = _random_params(kind, rng)
            fit = fit_model(synthetic_curve(kind, true), kind)
            assert fit.converged
            recovered = fit.param_vector()
            rel = np.abs(recovered - true) / np.maximum(np.abs(true), 1e-12)
            assert np.max(rel) < 1e-3

    def test_two_points_insufficient(self):
        curve = AccumulationCurve(points=((1, 1.0), (2, 2.0)))
        with pytest.raises(InsufficientDataError):
            fit_model(curve, ModelKind.M4)

    def test_power_law_is_not_saturating(self):
        with pytest.raises(ValueError):
            fit_model(synthetic_curve(ModelKind.M2, (50.0, 1000.0)), ModelKind.POWER_LAW)

    def test_flat_curve_converges_to_flat_model(self):
        curve = AccumulationCurve(points=tuple((n, 1.0) for n in (1, 5, 20, 100, 1000)))
        fit = fit_model(curve, ModelKind.M4)
        assert fit.predict(np.array([10.0, 1e4])) == pytest.approx([1.0, 1.0], abs=1e-3)

    def test_non_convergence_is_a_state_not_an_exception(self, monkeypatch):
        monkeypatch.setattr("metadiv.fitting.MAX_ITER", 1)
        fit = fit_model(synthetic_curve(ModelKind.M4, (100.0, 5000.0, 0.8)), ModelKind.M4)
        assert fit.converged is False
        assert fit.residual >= 0.0


class TestAsymptote:
    def test_returns_fitted_d(self):
        fit = fit_model(synthetic_curve(ModelKind.M4, (100.0, 5000.0, 0.8)), ModelKind.M4)
        assert asymptote(fit) == pytest.approx(100.0, rel=1e-4)

    def test_m2(self):
        fit = fit_model(synthetic_curve(ModelKind.M2, (50.0, 1000.0)), ModelKind.M2)
        assert asymptote(fit) == pytest.approx(50.0, rel=1e-6)

    def test_power_law_has_none(self):
        fit = fit_power_law(synthetic_curve(ModelKind.POWER_LAW, (6.7, 0.68)))
        with pytest.raises(ValueError):
            asymptote(fit)


class TestCompareModels:
    def test_m4_generated_curve_ranks_m4_first(self):
        curve = synthetic_curve(ModelKind.M4, (100.0, 5000.0, 0.8))
        ranking = compare_models(curve, train_limit=10_000)
        assert ranking[0].kind is ModelKind.M4
        assert ranking[0].holdout_rmse < 1e-3

    def test_m2_generated_curve_m2_and_m3_near_zero(self):
        curve = synthetic_curve(ModelKind.M2, (50.0, 1000.0))
        ranking = compare_models(curve, train_limit=10_000)
        by_kind = {rm.kind: rm.holdout_rmse for rm in ranking}
        assert by_kind[ModelKind.M2] == pytest.approx(0.0, abs=1e-6)
        # M3 with b = 0 contains M2, so it must match the data as well.
        assert by_kind[ModelKind.M3] == pytest.approx(0.0, abs=1e-4)

    def test_train_limit_beyond_curve(self):
        curve = synthetic_curve(ModelKind.M2, (50.0, 1000.0))
        with pytest.raises(InsufficientDataError):
            compare_models(curve, train_limit=10**6)

    def test_ascending_by_holdout(self):
        curve = synthetic_curve(ModelKind.M4, (80.0, 2000.0, 0.5))
        ranking = compare_models(curve, train_limit=10_000)
        rmses = [rm.holdout_rmse for rm in ranking if rm.fit.converged]
        assert rmses == sorted(rmses)


class TestFitResultSerialization:
    def test_json_fields(self):
        fit = fit_model(synthetic_curve(ModelKind.M2, (50.0, 1000.0)), ModelKind.M2)
        payload = json.loads(fit.to_json())
        assert payload.keys() == {"kind", "params", "residual", "n_points", "converged"}
        assert payload["kind"] == "m2"
        assert payload["params"].keys() == set(PARAM_NAMES[ModelKind.M2])
        assert payload["converged"] is True
        assert payload["n_points"] == len(LOG_GRID)
