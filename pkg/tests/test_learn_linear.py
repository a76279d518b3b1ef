import numpy as np
from hypothesis import given, strategies as st
import pytest

from mql.errors import DegenerateDesign, RangeError, TrainTooLarge
from mql.learn.linear import fit_linear, linear_predict
from mql.learn.metrics import evaluate
from mql.learn.model import feature_matrix
from mql.learn.rng import Lcg64
from mql.learn.split import train_test_split
from mql.table import NUMERIC, Column, Table


def _table(name="t", **cols) -> Table:
    return Table(name, tuple(
        Column(k, NUMERIC, tuple(float(v) for v in vs)) for k, vs in cols.items()
    ))


def _synthetic(rows=200, seed=7):
    """Noiseless y = 3 + 2*x1 - x2."""
    rng = Lcg64(seed)
    x1 = [rng.random() * 10 for _ in range(rows)]
    x2 = [rng.random() * 5 for _ in range(rows)]
    y = [3 + 2 * a - b for a, b in zip(x1, x2)]
    return _table(x1=x1, x2=x2, y=y)


class TestFitLinear:
    def test_exact_line(self):
        t = _table(x=[0, 1, 2], y=[1, 3, 5])
        m = fit_linear(t, "y", ["x"])
        assert m.params["intercept"] == pytest.approx(1.0, abs=1e-9)
        assert m.params["coefficients"][0] == pytest.approx(2.0, abs=1e-9)
        assert evaluate(m, t).mse == pytest.approx(0.0, abs=1e-18)

    def test_constant_target(self):
        t = _table(x=[1, 2, 3, 4], y=[7, 7, 7, 7])
        m = fit_linear(t, "y", ["x"])
        assert m.params["intercept"] == pytest.approx(7.0, abs=1e-9)
        assert m.params["coefficients"][0] == pytest.approx(0.0, abs=1e-9)

    def test_noiseless_plane_recovery(self):
        t = _synthetic()
        m = fit_linear(t, "y", ["x1", "x2"])
        assert m.params["intercept"] == pytest.approx(3.0, abs=1e-6)
        assert m.params["coefficients"][0] == pytest.approx(2.0, abs=1e-6)
        assert m.params["coefficients"][1] == pytest.approx(-1.0, abs=1e-6)
        assert evaluate(m, t).r2 == pytest.approx(1.0, abs=1e-9)

    def test_duplicated_feature_engages_ridge_fallback(self):
        rng = Lcg64(3)
        x = [rng.random() for _ in range(50)]
        y = [1 + 4 * v for v in x]
        dup = _table(a=x, b=x, y=y)
        m = fit_linear(dup, "y", ["a", "b"])
        assert any("ridge fallback" in note for note in m.notes)
        single = fit_linear(_table(a=x, y=y), "y", ["a"])
        X = np.array([[0.25], [0.75]])
        want = linear_predict(single, X)
        got = linear_predict(m, np.column_stack([X, X]))
        assert np.allclose(got, want, atol=1e-6)

    def test_degenerate_design(self):
        with pytest.raises(DegenerateDesign):
            fit_linear(_table(x=[1, 2], y=[1, 2]), "y", [])
        with pytest.raises(DegenerateDesign):
            fit_linear(_table(x=[1], y=[1]), "y", ["x"])


class TestOlsOptimality:
    def _objective_and_grad(self, t, m):
        X = feature_matrix(t, [f for f, _ in m.feature_schema])
        y = np.array(t.column("y").cells, dtype=float)
        design = np.column_stack([np.ones(len(X)), X])
        beta = np.array([m.params["intercept"]] + m.params["coefficients"])

        def objective(b):
            r = design @ b - y
            return float(np.mean(r * r))

        analytic = 2.0 / len(y) * design.T @ (design @ beta - y)
        return objective, beta, analytic

    def test_gradient_zero_and_matches_finite_differences(self):
        t = _synthetic()
        m = fit_linear(t, "y", ["x1", "x2"])
        objective, beta, analytic = self._objective_and_grad(t, m)
        h = 1e-5
        fd = np.empty_like(beta)
        for i in range(len(beta)):
            step = np.zeros_like(beta)
            step[i] = h
            fd[i] = (objective(beta + step) - objective(beta - step)) / (2 * h)
        assert np.max(np.abs(analytic - fd)) <= 1e-8
        assert np.max(np.abs(analytic)) <= 1e-8

    def test_grid_refinement_never_reduces_sse(self):
        t = _synthetic(rows=80)
        m = fit_linear(t, "y", ["x1", "x2"])
        objective, beta, _ = self._objective_and_grad(t, m)
        base = objective(beta)
        for i in range(len(beta)):
            for delta in (-1e-3, -1e-5, 1e-5, 1e-3):
                step = np.zeros_like(beta)
                step[i] = delta
                assert objective(beta + step) >= base - 1e-15

    def test_affine_invariance_of_predictions(self):
        t = _synthetic(rows=120)
        train, test = train_test_split(t, 90, 30, seed=42)
        m = fit_linear(train, "y", ["x1", "x2"])
        base = linear_predict(m, feature_matrix(test, ["x1", "x2"]))

        for scale in (100.0, -0.01, 3.5):
            scaled_cells = tuple(v * scale for v in train.column("x1").cells)
            train_s = train.with_column(Column("x1", NUMERIC, scaled_cells))
            m_s = fit_linear(train_s, "y", ["x1", "x2"])
            X_test = feature_matrix(test, ["x1", "x2"]).copy()
            X_test[:, 0] *= scale
            got = linear_predict(m_s, X_test)
            assert np.max(np.abs(got - base)) <= 1e-8


class TestSplit:
    def test_dye_scale_counts(self):
        t = _table(x=list(range(8802)), y=list(range(8802)))
        train, test = train_test_split(t, 7040, 1760, seed=42)
        assert (train.row_count, test.row_count) == (7040, 1760)

    def test_no_test_rows(self):
        t = _table(x=[1, 2, 3])
        train, test = train_test_split(t, 3, 0, seed=42)
        assert (train.row_count, test.row_count) == (3, 0)

    def test_clamp_with_warning(self, caplog):
        t = _table(x=list(range(506)))
        with caplog.at_level("WARNING", logger="mql"):
            train, test = train_test_split(t, 500, 100, seed=42)
        assert (train.row_count, test.row_count) == (500, 6)
        assert any("clamped" in r.message for r in caplog.records)

    def test_train_too_large(self):
        t = _table(x=[1, 2])
        with pytest.raises(TrainTooLarge):
            train_test_split(t, 3, 0, seed=42)

    def test_invalid_counts(self):
        t = _table(x=[1, 2])
        with pytest.raises(RangeError):
            train_test_split(t, 0, 1, seed=42)
        with pytest.raises(RangeError):
            train_test_split(t, 1, -1, seed=42)

    def test_deterministic_and_disjoint(self):
        t = _table(x=list(range(100)))
        a_train, a_test = train_test_split(t, 70, 20, seed=9)
        b_train, b_test = train_test_split(t, 70, 20, seed=9)
        assert a_train.column("x").cells == b_train.column("x").cells
        assert a_test.column("x").cells == b_test.column("x").cells
        taken = set(a_train.column("x").cells) | set(a_test.column("x").cells)
        assert len(taken) == 90

    @given(
        rows=st.integers(1, 60),
        n=st.integers(1, 60),
        m=st.integers(0, 80),
        seed=st.integers(0, 2**32),
    )
    def test_split_partition_property(self, rows, n, m, seed):
        from hypothesis import assume
        assume(n <= rows)
        t = _table(x=list(range(rows)))
        train, test = train_test_split(t, n, m, seed=seed)
        assert train.row_count == n
        assert test.row_count == min(m, rows - n)
        ids = list(train.column("x").cells) + list(test.column("x").cells)
        assert len(set(ids)) == len(ids)  # disjoint
        assert set(ids) <= set(float(i) for i in range(rows))
