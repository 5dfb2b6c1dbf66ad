import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.path.abspath(os.environ.get("YINDEX_CLI", str(ROOT / "build" / "tools" / "yindex")))
    if not os.path.exists(path):
        pytest.skip("yindex CLI not built")
    return path
