import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gen_fixtures import write_boston, write_dye, write_homes_new  # noqa: E402

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES_DIR = os.path.join(REPO_ROOT, "fixtures")


@pytest.fixture(scope="session")
def fixtures_dir() -> str:
    """Checked-in fixtures: housing tables and the prediction program."""
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def homes_dir(tmp_path_factory) -> str:
    """Housing fixtures: the checked-in files when present, else regenerated.

    Replacing fixtures/bostonHomes.csv with another 506-row table of the
    same schema re-runs the whole suite against it.
    """
    if all(
        os.path.isfile(os.path.join(FIXTURES_DIR, name))
        for name in ("bostonHomes.csv", "homesNew.csv")
    ):
        return FIXTURES_DIR
    d = tmp_path_factory.mktemp("homes")
    write_boston(str(d / "bostonHomes.csv"))
    write_homes_new(str(d / "homesNew.csv"))
    return str(d)


@pytest.fixture(scope="session")
def dye_dir(tmp_path_factory) -> str:
    """Full-size extinction-coefficient fixtures (8802 rows)."""
    d = tmp_path_factory.mktemp("dye")
    write_dye(str(d))
    return str(d)


@pytest.fixture(scope="session")
def small_dye_dir(tmp_path_factory) -> str:
    """Down-scaled variant for tests that only need the schema."""
    d = tmp_path_factory.mktemp("dye_small")
    write_dye(str(d), rows=400, test_rows=4)
    return str(d)
