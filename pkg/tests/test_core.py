import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make_samples
from wisig.core import (
    Dataset,
    SignatureSample,
    between_pairs,
    dichotomy_transform,
    within_pairs,
)
from wisig.errors import InputError

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


class TestDichotomyTransform:
    def test_identity_is_origin(self):
        v = [1.0, 2.0, 3.0]
        assert np.array_equal(dichotomy_transform(v, v), np.zeros(3))

    def test_absolute_difference(self):
        assert np.array_equal(dichotomy_transform([3.0, -1.0], [1.0, 2.0]), [2.0, 3.0])

    def test_symmetry_over_random_pairs(self, rng):
        for _ in range(100):
            a = rng.standard_normal(5)
            b = rng.standard_normal(5)
            assert np.array_equal(dichotomy_transform(a, b), dichotomy_transform(b, a))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InputError):
            dichotomy_transform([1.0, 2.0], [1.0])

    def test_non_finite_rejected(self):
        with pytest.raises(InputError):
            dichotomy_transform([np.nan, 0.0], [0.0, 0.0])
        with pytest.raises(InputError):
            dichotomy_transform([0.0], [np.inf])

    @given(
        arrays(np.float64, 4, elements=finite_floats),
        arrays(np.float64, 4, elements=finite_floats),
    )
    def test_nonnegative_and_symmetric(self, a, b):
        ab = dichotomy_transform(a, b)
        assert np.all(ab >= 0)
        assert np.array_equal(ab, dichotomy_transform(b, a))


class TestWithinPairs:
    def test_pair_count(self, rng):
        for m, expected in [(2, 1), (5, 10), (12, 66), (30, 435)]:
            vectors = within_pairs(make_samples("7", m, rng=rng))
            assert len(vectors) == expected
            assert all(v.klass == "within" for v in vectors)
            assert all(np.all(v.values >= 0) for v in vectors)

    def test_single_sample_rejected(self):
        with pytest.raises(InputError):
            within_pairs(make_samples("7", 1))

    def test_mixed_writers_rejected(self):
        with pytest.raises(InputError):
            within_pairs(make_samples("1", 2) + make_samples("2", 2))

    def test_forgery_samples_rejected(self):
        with pytest.raises(InputError):
            within_pairs(make_samples("1", 1) + make_samples("1", 1, label="skilled"))


class TestBetweenPairs:
    def test_cross_product_count(self, rng):
        refs = make_samples("1", 29, rng=rng)
        imps = [make_samples(str(w + 2), 1, rng=rng)[0] for w in range(15)]
        vectors = between_pairs(refs, imps)
        assert len(vectors) == 29 * 15 == 435
        assert all(v.klass == "between" for v in vectors)

    def test_single_pair(self):
        vectors = between_pairs(make_samples("1", 1), make_samples("2", 1))
        assert len(vectors) == 1

    def test_writer_overlap_rejected(self):
        with pytest.raises(InputError):
            between_pairs(make_samples("1", 2), make_samples("1", 1))


class TestDataset:
    def test_indexing(self, rng):
        samples = make_samples("1", 3, rng=rng) + make_samples("2", 2, rng=rng)
        samples += make_samples("2", 4, label="skilled", rng=rng)
        ds = Dataset(samples)
        assert ds.writers() == ["1", "2"]
        assert len(ds.genuine("1")) == 3
        assert ds.counts("2") == {"genuine": 2, "simple": 0, "skilled": 4}

    def test_numeric_writer_ordering(self):
        samples = [SignatureSample(w, "g0", "genuine", [0.0]) for w in ("10", "2", "1")]
        assert Dataset(samples).writers() == ["1", "2", "10"]

    def test_duplicate_sample_rejected(self):
        s = SignatureSample("1", "g0", "genuine", [0.0])
        with pytest.raises(InputError):
            Dataset([s, SignatureSample("1", "g0", "genuine", [1.0])])

    def test_mixed_dims_rejected(self):
        with pytest.raises(InputError):
            Dataset(
                [
                    SignatureSample("1", "a", "genuine", [0.0]),
                    SignatureSample("1", "b", "genuine", [0.0, 1.0]),
                ]
            )
