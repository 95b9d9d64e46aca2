import pathlib

import pytest

from dicelang import ScriptedSource

DATA_DIR = pathlib.Path(__file__).parent / "data"


def d6_indices(*values: int) -> ScriptedSource:
    """Script a source so consecutive d6 rolls show the given face values."""
    return ScriptedSource([v - 1 for v in values])


@pytest.fixture
def golden_corpus() -> list[str]:
    lines = (DATA_DIR / "golden_corpus.txt").read_text().splitlines()
    return [line for line in lines if line.strip()]
