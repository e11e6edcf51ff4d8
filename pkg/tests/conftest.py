import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wisig.core import DissimilarityVector, SignatureSample


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_samples(writer_id, n, dim=3, label="genuine", rng=None, offset=0.0):
    rng = rng or np.random.default_rng(0)
    return [
        SignatureSample(writer_id, f"{label[0]}{i}", label, offset + rng.standard_normal(dim))
        for i in range(n)
    ]


def make_learning_set(rng, n_per_class=20, dim=2, gap=4.0):
    """Well-separated within (near origin) vs between (shifted) vectors."""
    within = np.abs(rng.standard_normal((n_per_class, dim)))
    between = gap + np.abs(rng.standard_normal((n_per_class, dim)))
    out = [DissimilarityVector(v, "within") for v in within]
    out += [DissimilarityVector(v, "between") for v in between]
    return out
