"""Model evaluation: point values, nesting identities, analytic gradients."""

from __future__ import annotations

import numpy as np
import pytest

from metadiv.models import PARAM_NAMES, SATURATING, ModelKind, eval_model, model_gradient

N_GRID = np.array([0.0, 1.0, 10.0, 500.0, 10_000.0, 1e6])


class TestEvalModel:
    def test_m1_zero_at_origin(self):
        assert eval_model(ModelKind.M1, (37.0, 0.004), 0.0) == 0.0

    def test_m2_half_way_at_c(self):
        assert eval_model(ModelKind.M2, (50.0, 1000.0), 1000.0) == pytest.approx(25.0)

    def test_m3_at_origin(self):
        assert eval_model(ModelKind.M3, (10.0, 2.0, 4.0), 0.0) == pytest.approx(5.0)

    def test_m4_reaches_asymptote(self):
        value = eval_model(ModelKind.M4, (7.0, 3.0, 1.3), 1e12)
        assert value == pytest.approx(7.0, rel=1e-6)

    def test_power_law(self):
        assert eval_model(ModelKind.POWER_LAW, (6.7, 0.68), 1.0) == pytest.approx(6.7)

    def test_vectorized(self):
        out = eval_model(ModelKind.M2, (50.0, 1000.0), np.array([1000.0, 3000.0]))
        assert out == pytest.approx([25.0, 37.5])

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            eval_model(ModelKind.M2, (50.0, 1000.0, 1.0), 10.0)
        with pytest.raises(ValueError):
            eval_model(ModelKind.M4, (7.0, 3.0), 10.0)


class TestNesting:
    def test_m3_with_zero_b_is_m2(self):
        m3 = eval_model(ModelKind.M3, (42.0, 0.0, 800.0), N_GRID)
        m2 = eval_model(ModelKind.M2, (42.0, 800.0), N_GRID)
        assert m3 == pytest.approx(m2, rel=1e-14)

    def test_m4_with_unit_alpha_is_m2(self):
        m4 = eval_model(ModelKind.M4, (42.0, 800.0, 1.0), N_GRID)
        m2 = eval_model(ModelKind.M2, (42.0, 800.0), N_GRID)
        assert m4 == pytest.approx(m2, rel=1e-14)


class TestMonotonicity:
    @pytest.mark.parametrize("kind", sorted(SATURATING, key=lambda k: k.value))
    def test_non_decreasing_in_n(self, kind):
        rng = np.random.default_rng(99)
        for _ in range(200):
            params = _random_params(kind, rng)
            n1, n2 = np.sort(rng.uniform(0.0, 1e6, size=2))
            v1 = eval_model(kind, params, n1)
            v2 = eval_model(kind, params, n2)
            assert v1 <= v2 + 1e-9 * max(1.0, abs(v2))


def _random_params(kind: ModelKind, rng) -> np.ndarray:
    d = rng.uniform(2.0, 200.0)
    if kind is ModelKind.M1:
        return np.array([d, rng.uniform(1e-4, 1e-2)])
    if kind is ModelKind.M2:
        return np.array([d, rng.uniform(50.0, 2e4)])
    if kind is ModelKind.M3:
        c = rng.uniform(50.0, 2e4)
        return np.array([d, rng.uniform(0.0, 0.5 * c), c])
    if kind is ModelKind.M4:
        return np.array([d, rng.uniform(50.0, 2e4), rng.uniform(0.2, 3.0)])
    return np.array([rng.uniform(1.0, 20.0), rng.uniform(0.3, 0.9)])


def _central_difference(kind, params, n, j, h):
    up = np.array(params, dtype=float)
    down = up.copy()
    up[j] += h
    down[j] -= h
    return (eval_model(kind, up, n) - eval_model(kind, down, n)) / (2 * h)


class TestGradients:
    @pytest.mark.parametrize("kind", list(PARAM_NAMES))
    def test_matches_central_differences(self, kind):
        rng = np.random.default_rng(1234)
        n = np.array([1.0, 17.0, 400.0, 9_000.0, 120_000.0])
        for _ in range(25):
            params = _random_params(kind, rng)
            grad = model_gradient(kind, params, n)
            for j, value in enumerate(params):
                h = max(abs(value), 1e-3) * 1e-6
                approx = _central_difference(kind, params, n, j, h)
                # Entries far below the finite-difference noise floor are
                # indistinguishable from zero; the unit floor keeps the
                # check relative wherever the derivative is meaningful.
                scale = np.maximum(np.maximum(np.abs(approx), np.abs(grad[:, j])), 1.0)
                assert np.all(np.abs(grad[:, j] - approx) / scale < 1e-5)

    def test_gradient_shape(self):
        grad = model_gradient(ModelKind.M3, (10.0, 1.0, 5.0), np.arange(4.0))
        assert grad.shape == (4, 3)

    def test_m4_gradient_finite_at_origin(self):
        grad = model_gradient(ModelKind.M4, (10.0, 5.0, 0.8), np.array([0.0, 1.0]))
        assert np.all(np.isfinite(grad))
