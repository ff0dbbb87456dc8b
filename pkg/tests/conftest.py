from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def corpus_dir() -> Path:
    return DATA_DIR / "corpus"


@pytest.fixture
def golden_csv() -> Path:
    return DATA_DIR / "golden_metrics.csv"
