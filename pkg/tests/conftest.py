import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import DNA, make_seq  # noqa: E402

from wavealign import ScoringScheme  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def dna_scheme():
    """The CLI's default DNA scheme: +1/-3, gap 5+2k."""
    return ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)


@pytest.fixture
def blosum62_bytes():
    return (DATA / "BLOSUM62").read_bytes()
