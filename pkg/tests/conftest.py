import random
import sys

import pytest

sys.setrecursionlimit(20000)


@pytest.fixture
def rng():
    return random.Random(0xB1CA)

from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")
