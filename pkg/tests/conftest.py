import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))  # makes topsis_oracle importable from tests

DATA_DIR = HERE / "data"


@pytest.fixture(scope="session")
def app_config():
    from greenpod.config import default_config

    return default_config()


@pytest.fixture
def fresh_nodes(app_config):
    return app_config.fresh_nodes()


@pytest.fixture(scope="session")
def topsis_golden():
    with open(DATA_DIR / "topsis_golden.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def service_corpus():
    corpus = []
    for path in sorted((DATA_DIR / "service_corpus").glob("*.json")):
        with open(path) as fh:
            corpus.append(json.load(fh))
    return corpus
