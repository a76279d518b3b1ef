import os

import pytest

from mql.analyzer import Diagnostic
from mql.learn.model import Model
from mql.learn.rng import Lcg64
from mql.planner import Session, run_program
from mql.results import ResultSet
from mql.store import list_models
from mql.syntax import parse_program
from mql.table import Table, load_csv


def _session(tmp_path, data_dir, **kw) -> Session:
    return Session(
        data_dir=str(data_dir),
        out_dir=str(tmp_path / "out"),
        store_dir=str(tmp_path / "models"),
        **kw,
    )


def _write_linear_csv(path, rows=100, noise=0.0, seed=3, target="y"):
    rng = Lcg64(seed)
    lines = [f"x1,x2,tag,{target}"]
    for i in range(rows):
        a = rng.random() * 10
        b = rng.random() * 4
        y = 3.0 + 2.0 * a - b + noise * (rng.random() - 0.5)
        lines.append(f"{a!r},{b!r},row{i},{y!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_noise_csv(path, rows=80, seed=5):
    rng = Lcg64(seed)
    lines = ["x1,x2,y"]
    for _ in range(rows):
        lines.append(f"{rng.random()!r},{rng.random()!r},{rng.random()!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


class TestHomesPipeline:
    def test_zero_fill_run(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir, missing_policy="zero")
        program = parse_program(
            "GENERATE DISPLAY OF PREDICTION MEDV OVER homesNew LABEL HomeNo "
            "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
        )
        results = run_program(program, session)
        assert len(results) == 1
        r = results[0]
        assert isinstance(r, ResultSet)
        assert r.row_count == 4
        assert r.label_columns == ("HomeNo",)
        names = [os.path.basename(p) for p in session.artifacts]
        assert "stmt01_result.csv" in names
        assert "stmt01_bar.svg" in names

    def test_impute_changes_only_rows_with_missing_cells(self, tmp_path, homes_dir):
        program = parse_program(
            "GENERATE PREDICTION MEDV OVER homesNew LABEL HomeNo "
            "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
        )
        zero = run_program(program, _session(tmp_path / "a", homes_dir))[0]
        imputed = run_program(
            program,
            _session(tmp_path / "b", homes_dir, missing_policy="impute"),
        )[0]
        assert zero.outputs[0] == pytest.approx(imputed.outputs[0], abs=1e-9)
        for i in (1, 2, 3):  # every other row has at least one missing cell
            assert abs(zero.outputs[i] - imputed.outputs[i]) > 1e-6


class TestDyeSequence:
    def test_four_statement_program(self, tmp_path, dye_dir):
        program = parse_program("""
            INSPECT ShouldBe NUMERIZE AS log(ShouldBe)
            FROM High_Extinction.csv;

            CONSTRUCT epsilonPred FOR
            PREDICTION epsilon
            USING RandomForest
            TRAIN ON 7040 TEST ON 1760
            FEATURES *
            FROM DyeData;

            GENERATE DISPLAY OF
            PREDICTION epsilon OVER TestData
            USING ALGORITHM LinearRegression
            WITH MODEL ACCURACY 80
            FEATURES *
            FROM DyeData;

            GENERATE DISPLAY OF
            PREDICTION epsilon OVER TestData
            USING MODEL epsilonPred;
        """)
        session = _session(tmp_path, dye_dir)
        results = run_program(program, session)
        kinds = [type(r).__name__ for r in results]
        assert kinds == ["Table", "Model", "ResultSet", "ResultSet"]
        model = results[1]
        assert model.test_metrics is not None
        assert model.test_metrics.mse is not None
        # Only the explicit CONSTRUCT persists anything.
        assert [m["name"] for m in list_models(session.store_dir)] == ["epsilonPred"]
        # The custom GENERATE met its 0.8 threshold on strongly linear data.
        assert results[2].row_count == 6

    def test_inspect_binds_for_rest_of_program(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        with open(data / "samples.csv", "w") as fh:
            fh.write("x,y\n1,1\n1,1\n2,2\n3,3\n4,4\n5,5\n6,6\n")
        program = parse_program(
            "INSPECT x DEDUPLICATE FROM samples;"
            "CONSTRUCT m FOR PREDICTION y TRAIN ON COUNT(*) - 2 TEST ON 2 "
            "FEATURES x FROM samples;"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        assert isinstance(results[1], Model)
        # COUNT(*) saw the deduplicated binding (6 rows), not the file (7).
        assert results[0].row_count == 6

    def test_inspect_writes_wrangle_artifacts(self, tmp_path, dye_dir):
        program = parse_program(
            "INSPECT ShouldBe NUMERIZE AS log(ShouldBe) FROM High_Extinction.csv"
        )
        session = _session(tmp_path, dye_dir)
        run_program(program, session)
        names = sorted(os.path.basename(p) for p in session.artifacts)
        assert names == [
            "High_Extinction.csv.inspected.csv",
            "High_Extinction.csv.wrangle.log",
        ]


class TestDependencySemantics:
    def test_transient_models_never_persist(self, tmp_path, homes_dir):
        program = parse_program(
            "GENERATE PREDICTION MEDV OVER homesNew "
            "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
        )
        session = _session(tmp_path, homes_dir)
        run_program(program, session)
        assert list_models(session.store_dir) == []

    def test_wrangling_is_never_implicit(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        with open(data / "mixed.csv", "w") as fh:
            fh.write("size,grade,y\n1,poor,1\n2,good,2\n3,good,3\n4,poor,4\n")
        program = parse_program(
            "CONSTRUCT m FOR PREDICTION y TRAIN ON 3 TEST ON 1 "
            "FEATURES size, grade FROM mixed;"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        assert all(isinstance(r, Diagnostic) for r in results)
        assert any(r.code == "MQL-109" for r in results)
        assert list_models(session.store_dir) == []

    def test_stored_model_generate_leaves_manifest_bytes_alone(
        self, tmp_path, homes_dir
    ):
        construct = parse_program(
            "CONSTRUCT homesModel FOR PREDICTION MEDV TRAIN ON 400 TEST ON 100 "
            "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
        )
        session = _session(tmp_path, homes_dir)
        run_program(construct, session)
        manifest_path = os.path.join(
            session.store_dir, "homesModel", "manifest.json"
        )
        before = open(manifest_path, "rb").read()
        use = parse_program(
            "GENERATE PREDICTION MEDV OVER homesNew USING MODEL homesModel"
        )
        results = run_program(use, session)
        assert isinstance(results[0], ResultSet)
        assert open(manifest_path, "rb").read() == before

    def test_fail_aborts_remainder_but_keeps_outputs(self, tmp_path, homes_dir):
        program = parse_program(
            "GENERATE PREDICTION MEDV OVER homesNew "
            "FEATURES CRIM, ZN FROM bostonHomes;"
            "GENERATE PREDICTION MEDV OVER homesNew "
            "FEATURES CRIM FROM missingTable;"
            "GENERATE PREDICTION MEDV OVER homesNew "
            "FEATURES CRIM, ZN FROM bostonHomes;"
        )
        session = _session(tmp_path, homes_dir)
        results = run_program(program, session)
        assert isinstance(results[0], ResultSet)
        assert isinstance(results[1], Diagnostic)
        assert len(results) == 2  # third statement never ran

    def test_empty_program(self, tmp_path, homes_dir):
        assert run_program([], _session(tmp_path, homes_dir)) == []


class TestBestMode:
    def test_noiseless_linear_selects_linear_model(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv")
        program = parse_program(
            "GENERATE PREDICTION y WITH MODEL ACCURACY 0.9 "
            "FEATURES x1, x2 FROM clean"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        assert isinstance(results[0], ResultSet)

    def test_best_construct_persists_winner(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv")
        program = parse_program(
            "CONSTRUCT best FOR PREDICTION y WITH MODEL ACCURACY 0.9 "
            "TRAIN ON 80 TEST ON 20 FEATURES x1, x2 FROM clean"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        model = results[0]
        assert isinstance(model, Model)
        assert model.algorithm in ("LinearRegression", "Ridge")
        assert model.score() >= 0.999

    def test_pure_noise_below_threshold_lists_all_scores(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_noise_csv(data / "noise.csv")
        program = parse_program(
            "CONSTRUCT hopeless FOR PREDICTION y WITH MODEL ACCURACY 0.9 "
            "TRAIN ON 60 TEST ON 20 FEATURES x1, x2 FROM noise"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        assert len(results) == 1
        diag = results[0]
        assert isinstance(diag, Diagnostic)
        assert diag.code == "MQL-037"
        for name in ("LinearRegression", "Ridge", "DecisionTree",
                     "RandomForest", "KNN"):
            assert name in diag.message
        assert list_models(session.store_dir) == []

    def test_argmax_matches_independent_refits(self, tmp_path):
        from mql.learn import evaluate, sweep_for, train_test_split
        from mql.learn.registry import fit as registry_fit

        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv", noise=2.0)
        session = _session(tmp_path, data)
        program = parse_program(
            "CONSTRUCT pick FOR PREDICTION y WITH MODEL ACCURACY 0.5 "
            "TRAIN ON 80 TEST ON 20 FEATURES x1, x2 FROM clean"
        )
        chosen = run_program(program, session)[0]

        table = load_csv(str(data / "clean.csv"), name="clean")
        from mql.table import select_columns
        assembled = select_columns(table, ["x1", "x2", "y", "tag"])
        train, test = train_test_split(assembled, 80, 20, session.seed)
        scores = {}
        for spec in sweep_for("pred"):
            m = registry_fit(spec, train, "y", ["x1", "x2"], "pred", None,
                             session.seed, "probe")
            scores[spec.name] = evaluate(m, test).normalized_score
        best_name = max(scores, key=lambda n: scores[n])
        assert chosen.algorithm == best_name


class TestGenerateVariants:
    def test_holdout_generate_has_actuals_and_scatter(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv")
        program = parse_program(
            "GENERATE DISPLAY OF PREDICTION y FEATURES x1, x2 FROM clean"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        r = results[0]
        assert r.actuals is not None
        assert r.row_count == 20  # held-out fifth of 100 rows
        assert any(p.endswith("stmt01_scatter.svg") for p in session.artifacts)

    def test_cluster_generate(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        rng = Lcg64(8)
        lines = ["a,b"]
        for _ in range(30):
            lines.append(f"{rng.random()!r},{rng.random()!r}")
        for _ in range(30):
            lines.append(f"{8 + rng.random()!r},{9 + rng.random()!r}")
        with open(data / "blobs.csv", "w") as fh:
            fh.write("\n".join(lines) + "\n")
        program = parse_program(
            "GENERATE DISPLAY OF CLUSTER OF 2 FEATURES a, b FROM blobs"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        r = results[0]
        assert set(r.outputs) <= {0, 1}
        assert any(p.endswith("stmt01_clusters.svg") for p in session.artifacts)

    def test_classification_generate(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        rng = Lcg64(6)
        lines = ["u,v,grade"]
        for _ in range(40):
            x = rng.random()
            lines.append(f"{x!r},{rng.random()!r},{'lo' if x < 0.5 else 'hi'}")
        with open(data / "grades.csv", "w") as fh:
            fh.write("\n".join(lines) + "\n")
        program = parse_program(
            "GENERATE CLASSIFICATION INTO lo, hi FEATURES u, v FROM grades"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        assert set(results[0].outputs) <= {"lo", "hi"}

    def test_classification_over_unlabelled_table(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        rng = Lcg64(26)
        lines = ["u,v,grade"]
        for _ in range(60):
            x = rng.random()
            lines.append(f"{x!r},{rng.random()!r},{'lo' if x < 0.5 else 'hi'}")
        (data / "grades.csv").write_text("\n".join(lines) + "\n")
        (data / "incoming.csv").write_text(
            "id,u,v\nn1,0.05,0.5\nn2,0.95,0.5\n"
        )
        program = parse_program(
            "GENERATE DISPLAY OF CLASSIFICATION INTO lo, hi OVER incoming "
            "LABEL id FEATURES u, v FROM grades"
        )
        session = _session(tmp_path, data)
        results = run_program(program, session)
        r = results[0]
        assert r.outputs == ("lo", "hi")
        assert r.labels == (("n1", "n2"),)
        assert any(p.endswith("stmt01_bar.svg") for p in session.artifacts)

    def test_algorithm_task_mismatch(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv")
        program = parse_program(
            "GENERATE PREDICTION y USING ALGORITHM KMeans "
            "FEATURES x1, x2 FROM clean"
        )
        results = run_program(program, _session(tmp_path, data))
        assert results[0].code == "MQL-036"

    def test_absent_stored_model_is_a_diagnostic(self, tmp_path, homes_dir):
        program = parse_program(
            "GENERATE DISPLAY OF PREDICTION Kappa OVER homesNew "
            "USING MODEL LipidGnn"
        )
        results = run_program(program, _session(tmp_path, homes_dir))
        assert len(results) == 1
        assert results[0].code == "MQL-040"

    def test_where_filters_from_table(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv", rows=120)
        program = parse_program(
            "CONSTRUCT m FOR PREDICTION y TRAIN ON COUNT(*) - 5 TEST ON 5 "
            "FEATURES x1, x2 FROM clean WHERE x1 > 5"
        )
        session = _session(tmp_path, data)
        model = run_program(program, session)[0]
        assert isinstance(model, Model)

    def test_accuracy_below_threshold_on_custom(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_noise_csv(data / "noise.csv")
        program = parse_program(
            "GENERATE PREDICTION y USING ALGORITHM LinearRegression "
            "WITH MODEL ACCURACY 0.9 FEATURES x1, x2 FROM noise"
        )
        results = run_program(program, _session(tmp_path, data))
        assert results[0].code == "MQL-038"

    def test_zero_test_rows_leaves_test_metrics_unset(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv", rows=40)
        program = parse_program(
            "CONSTRUCT m FOR PREDICTION y TRAIN ON COUNT(*) TEST ON 0 "
            "FEATURES x1, x2 FROM clean"
        )
        model = run_program(program, _session(tmp_path, data))[0]
        assert isinstance(model, Model)
        assert model.test_metrics is None
        assert model.train_metrics is not None

    def test_cluster_count_expression(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        rng = Lcg64(14)
        lines = ["a,b"]
        for offset in (0.0, 50.0, 100.0):
            for _ in range(20):
                lines.append(f"{offset + rng.random()!r},{offset + rng.random()!r}")
        (data / "blobs.csv").write_text("\n".join(lines) + "\n")
        program = parse_program(
            "GENERATE CLUSTER OF COUNT(*) / 20 FEATURES a, b FROM blobs"
        )
        results = run_program(program, _session(tmp_path, data))
        assert set(results[0].outputs) <= {0, 1, 2}

    def test_star_features_exclude_inferred_class_column(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        rng = Lcg64(9)
        lines = ["u,v,grade"]
        for _ in range(40):
            x = rng.random()
            lines.append(f"{x!r},{rng.random()!r},{'lo' if x < 0.5 else 'hi'}")
        (data / "grades.csv").write_text("\n".join(lines) + "\n")
        program = parse_program(
            "GENERATE CLASSIFICATION INTO lo, hi FEATURES * FROM grades"
        )
        results = run_program(program, _session(tmp_path, data))
        assert isinstance(results[0], ResultSet)
        assert set(results[0].outputs) <= {"lo", "hi"}

    def test_where_filtering_everything_is_a_clean_diagnostic(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv", rows=30)
        program = parse_program(
            "CONSTRUCT m FOR PREDICTION y TRAIN ON COUNT(*) TEST ON 0 "
            "FEATURES x1, x2 FROM clean WHERE x1 > 999"
        )
        results = run_program(program, _session(tmp_path, data))
        assert len(results) == 1
        assert isinstance(results[0], Diagnostic)

    def test_empty_over_table_with_display_is_a_diagnostic(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        _write_linear_csv(data / "clean.csv", rows=30)
        (data / "probe.csv").write_text("x1,x2\n")
        program = parse_program(
            "GENERATE DISPLAY OF PREDICTION y OVER probe "
            "FEATURES x1, x2 FROM clean"
        )
        results = run_program(program, _session(tmp_path, data))
        assert results[-1].code == "MQL-050"  # nothing to plot

    def test_missing_training_rows_dropped(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        with open(data / "gappy.csv", "w") as fh:
            fh.write("x,y\n1,2\n2,\n3,6\n4,8\n5,10\n-,12\n")
        program = parse_program(
            "CONSTRUCT m FOR PREDICTION y TRAIN ON 3 TEST ON 1 "
            "FEATURES x FROM gappy"
        )
        results = run_program(program, _session(tmp_path, data))
        assert isinstance(results[0], Model)


class TestDeterminism:
    def test_same_seed_bitwise_outputs(self, tmp_path, homes_dir):
        program_text = (
            "GENERATE DISPLAY OF PREDICTION MEDV OVER homesNew LABEL HomeNo "
            "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
        )
        paths = []
        for sub in ("a", "b"):
            session = _session(tmp_path / sub, homes_dir)
            run_program(parse_program(program_text), session)
            paths.append(sorted(session.artifacts))
        for left, right in zip(*paths):
            assert os.path.basename(left) == os.path.basename(right)
            assert open(left, "rb").read() == open(right, "rb").read()
