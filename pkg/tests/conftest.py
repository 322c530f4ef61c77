import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diagtrace.forge import build_chain  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def chains():
    """Chain levels 1..3, built once per session."""
    return {k: build_chain(k) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def golden():
    return lambda name: (GOLDEN / name).read_text()
