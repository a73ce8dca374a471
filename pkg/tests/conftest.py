import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from schemes import corpus_schemes  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return corpus_schemes()


@pytest.fixture
def rng():
    return random.Random(12345)
