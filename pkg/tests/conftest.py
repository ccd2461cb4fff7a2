import json

import pytest

from invgen.group import load_group
from invgen.properties import verify_props


@pytest.fixture(scope="session")
def prop_report():
    """One full property-battery run, shared by every test that needs it."""
    return verify_props()


@pytest.fixture(scope="session")
def s3():
    return load_group({"family": "sym", "n": 3})


@pytest.fixture(scope="session")
def s4():
    return load_group({"family": "sym", "n": 4})


@pytest.fixture()
def mini_corpus(tmp_path):
    """A one-line corpus file; cheap enough for survey round trips."""
    path = tmp_path / "mini.jsonl"
    rows = [
        {"family": "cyclic", "n": 2},
        {"family": "cyclic", "n": 3},
        {"family": "sym", "n": 3},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    return str(path)
