import os

import pytest

from mql.analyzer import gather
from mql.emitter import build_script
from mql.errors import UnsupportedForEmission
from mql.planner import Session, run_program
from mql.syntax import parse_program, parse_statement

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")
HOMES_QUERY = (
    "GENERATE DISPLAY OF PREDICTION MEDV OVER homesNew LABEL HomeNo "
    "FEATURES CRIM, ZN, NOX, DIS, TAX, PTRATIO FROM bostonHomes"
)


def _golden(name: str, **paths) -> str:
    text = open(os.path.join(GOLDEN_DIR, name)).read()
    for token, real in paths.items():
        text = text.replace(token, real)
    return text


def _session(tmp_path, data_dir, **kw) -> Session:
    return Session(data_dir=str(data_dir), out_dir=str(tmp_path / "out"),
                   store_dir=str(tmp_path / "models"), **kw)


class TestGoldenEmission:
    def test_prediction_with_over_matches_golden(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir, missing_policy="impute")
        text = build_script(gather(parse_statement(HOMES_QUERY)), session, 1)
        want = _golden(
            "pred_over_impute.py.golden",
            __DATA_PATH__=os.path.join(homes_dir, "bostonHomes.csv"),
            __OVER_PATH__=os.path.join(homes_dir, "homesNew.csv"),
        )
        assert text == want

    def test_construct_with_explicit_counts_matches_golden(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        (data / "DyeData.csv").write_text("MolWt,LogP,epsilon\n1,2,3\n")
        session = _session(tmp_path, data)
        statement = parse_statement(
            "CONSTRUCT epsilonPred FOR PREDICTION epsilon USING RandomForest "
            "TRAIN ON 7040 TEST ON 1760 FEATURES * FROM DyeData"
        )
        text = build_script(gather(statement), session, 1)
        want = _golden(
            "construct_counts.py.golden",
            __DATA_PATH__=os.path.join(str(data), "DyeData.csv"),
        )
        assert text == want

    def test_cluster_of_three_matches_golden(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        (data / "blobs.csv").write_text("a,b\n1,2\n3,4\n5,6\n")
        session = _session(tmp_path, data)
        statement = parse_statement(
            "GENERATE CLUSTER OF 3 FEATURES a, b FROM blobs"
        )
        text = build_script(gather(statement), session, 1)
        want = _golden(
            "cluster3.py.golden",
            __DATA_PATH__=os.path.join(str(data), "blobs.csv"),
        )
        assert text == want


class TestEmissionProperties:
    def test_deterministic(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir)
        d = gather(parse_statement(HOMES_QUERY))
        assert build_script(d, session, 1) == build_script(d, session, 1)

    def test_header_is_machine_parsable(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir, missing_policy="impute")
        text = build_script(gather(parse_statement(HOMES_QUERY)), session, 3)
        header = {}
        for line in text.splitlines():
            if not line.startswith("# mql:"):
                break
            key, value = line[len("# mql:"):].split("=", 1)
            header[key] = value
        assert header["statement"] == "3"
        assert header["seed"] == "42"
        assert header["missing"] == "impute"
        assert header["data"].endswith("bostonHomes.csv")
        assert header["over"].endswith("homesNew.csv")

    def test_zero_variant_fills_instead_of_imputing(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir, missing_policy="zero")
        text = build_script(gather(parse_statement(HOMES_QUERY)), session, 1)
        assert "fillna(0.0)" in text
        assert "SimpleImputer" not in text

    def test_stored_model_unsupported(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir)
        d = gather(parse_statement(
            "GENERATE PREDICTION MEDV OVER homesNew USING MODEL archived"
        ))
        with pytest.raises(UnsupportedForEmission):
            build_script(d, session, 1)

    def test_best_mode_emits_all_candidates(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir)
        d = gather(parse_statement(
            "GENERATE PREDICTION MEDV WITH MODEL ACCURACY 0.9 "
            "FEATURES CRIM, ZN FROM bostonHomes"
        ))
        text = build_script(d, session, 1)
        for name in ("LinearRegression", "Ridge", "DecisionTreeRegressor",
                     "RandomForestRegressor", "KNeighborsRegressor"):
            assert name in text
        assert "0.9" in text

    def test_inspect_stanzas(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        (data / "t.csv").write_text("a,b,c,d\n1,2,3,4\n5,6,7,8\n9,1,2,3\n")
        session = _session(tmp_path, data)
        d = gather(parse_statement(
            "INSPECT a IMPUTE, b NUMERIZE AS log(b), c CATEGORIZE INTO lo, hi, "
            "d DEDUPLICATE FROM t"
        ))
        text = build_script(d, session, 1)
        assert 'df["a"].fillna' in text
        assert 'np.log(df["b"])' in text
        assert "pd.qcut" in text
        assert "drop_duplicates" in text
        assert "t.inspected.csv" in text

    def test_where_clause_becomes_filter(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir)
        d = gather(parse_statement(
            "GENERATE PREDICTION MEDV FEATURES CRIM, ZN FROM bostonHomes "
            "WHERE TAX > 200 AND ZN = 18"
        ))
        text = build_script(d, session, 1)
        assert 'df = df[(df["TAX"] > 200) & (df["ZN"] == 18)]' in text


class TestEmitBackendRuns:
    def test_program_emission_writes_scripts(self, tmp_path, homes_dir):
        session = _session(tmp_path, homes_dir, backend="emit")
        program = parse_program(open(os.path.join(
            os.path.dirname(__file__), "data", "corpus", "homes_predict.mql"
        )).read())
        results = run_program(program, session)
        assert len(results) == 1
        assert os.path.isfile(results[0].path)
        assert results[0].path.endswith("stmt01_backend.py")

    def test_stored_statement_aborts_emission_keeping_earlier_scripts(
        self, tmp_path, small_dye_dir
    ):
        program = parse_program("""
            INSPECT ShouldBe NUMERIZE AS log(ShouldBe)
            FROM High_Extinction.csv;

            CONSTRUCT epsilonPred FOR
            PREDICTION epsilon
            USING RandomForest
            TRAIN ON 300 TEST ON 100
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
        session = _session(tmp_path, small_dye_dir, backend="emit")
        results = run_program(program, session)
        kinds = [getattr(r, "kind", None) for r in results[:3]]
        assert kinds == ["inspect", "construct_pred", "pred_over"]
        # Emit mode never populates the store, so the stored-model statement
        # already fails validation (and emission has no backend form for it
        # either way); the three finished scripts are kept.
        assert results[3].code == "MQL-040"
        written = sorted(os.path.basename(p) for p in session.artifacts
                         if p.endswith(".py"))
        assert written == [
            "stmt01_backend.py", "stmt02_backend.py", "stmt03_backend.py",
        ]

    def test_emitted_inspect_rebinds_later_reads(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        (data / "t.csv").write_text("a,y\n1,2\n2,4\n3,6\n4,8\n5,10\n")
        session = _session(tmp_path, data, backend="emit")
        program = parse_program(
            "INSPECT a IMPUTE FROM t;"
            "CONSTRUCT m FOR PREDICTION y TRAIN ON 3 TEST ON 2 "
            "FEATURES a FROM t;"
        )
        results = run_program(program, session)
        assert len(results) == 2
        assert 't.inspected.csv' in results[1].text
