import pytest

from tableguard.engine import load_policy
from tableguard.gazetteer import bundled_gazetteer_path, load_bundled_gazetteer, load_gazetteer

from pathlib import Path

DATA = Path(__file__).parent / "data"
DEMO_POLICY = Path(__file__).parents[1] / "src" / "tableguard" / "data" / "demo_policy.json"


@pytest.fixture(scope="session")
def gazetteer():
    return load_bundled_gazetteer()


@pytest.fixture(scope="session")
def fnol_text():
    return (DATA / "fnol.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def demo_policy():
    return load_policy(DEMO_POLICY)


@pytest.fixture()
def tiny_gazetteer(tmp_path):
    """Fixture gazetteer from a handful of records; mirrors the documented
    TSV format including the '-' era marker."""
    rows = [
        "name\tpart\tgender\trank\tera",
        "homer\tfirst\tmale\t412\t1950s",
        "beth\tfirst\tfemale\t88\t1970s",
        "annie\tfirst\tfemale\t61\t1970s",
        "carol\tfirst\tfemale\t30\t1950s",
        "paula\tfirst\tfemale\t310\t1990s",
        "paul\tfirst\tmale\t13\t1950s",
        "edgar\tfirst\tmale\t350\t1950s",
        "simpson\tlast\tunknown\t733\t-",
        "sanchez\tlast\tunknown\t28\t-",
        "edison\tlast\tunknown\t900\t-",
        "buchman\tlast\tunknown\t1500\t-",
    ]
    path = tmp_path / "tiny_gazetteer.tsv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return load_gazetteer(path)
