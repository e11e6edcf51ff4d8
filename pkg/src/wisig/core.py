"""Domain types and the dichotomy transformation.

Feature vectors are plain 1-D float64 numpy arrays. The dichotomy
transformation maps a pair of feature vectors to their element-wise
absolute difference, turning the multi-writer identification problem
into a two-class within/between problem in the dissimilarity space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InputError

LABEL_GENUINE = "genuine"
LABEL_SIMPLE = "simple"
LABEL_SKILLED = "skilled"
SAMPLE_LABELS = (LABEL_GENUINE, LABEL_SIMPLE, LABEL_SKILLED)

KLASS_WITHIN = "within"
KLASS_BETWEEN = "between"


def as_feature_vector(values) -> np.ndarray:
    """Coerce to a validated 1-D float64 array (finite, dim >= 1)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise InputError(f"feature vector must be 1-D and nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("feature vector contains non-finite values")
    return arr


@dataclass(frozen=True)
class SignatureSample:
    """One signature: feature vector plus writer identity and label."""

    writer_id: str
    sample_id: str
    label: str
    features: np.ndarray

    def __post_init__(self):
        if self.label not in SAMPLE_LABELS:
            raise InputError(f"unknown label {self.label!r}")
        object.__setattr__(self, "features", as_feature_vector(self.features))

    @property
    def dim(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class DissimilarityVector:
    """Absolute element-wise difference of two feature vectors.

    klass is "within" (same writer) or "between" (different writers);
    query_ref records the (writer_id, sample_id) provenance of the pair.
    """

    values: np.ndarray
    klass: str
    query_ref: tuple = ()

    def __post_init__(self):
        if self.klass not in (KLASS_WITHIN, KLASS_BETWEEN):
            raise InputError(f"unknown dissimilarity class {self.klass!r}")

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def dichotomy_transform(a, b) -> np.ndarray:
    """Element-wise |a - b|. Symmetric; zero iff a == b."""
    a = as_feature_vector(a)
    b = as_feature_vector(b)
    if a.shape[0] != b.shape[0]:
        raise InputError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return np.abs(a - b)


def within_pairs(samples: list[SignatureSample]) -> list[DissimilarityVector]:
    """All C(m, 2) unordered same-writer pairs, labeled within.

    Requires >= 2 genuine samples of a single writer.
    """
    if len(samples) < 2:
        raise InputError("within_pairs needs at least 2 samples")
    writers = {s.writer_id for s in samples}
    if len(writers) != 1:
        raise InputError(f"within_pairs given samples from {len(writers)} writers")
    if any(s.label != LABEL_GENUINE for s in samples):
        raise InputError("within_pairs requires genuine samples only")
    out = []
    for sj, sk in combinations(samples, 2):
        out.append(
            DissimilarityVector(
                values=dichotomy_transform(sj.features, sk.features),
                klass=KLASS_WITHIN,
                query_ref=((sj.writer_id, sj.sample_id), (sk.writer_id, sk.sample_id)),
            )
        )
    return out


def between_pairs(
    references: list[SignatureSample], impostors: list[SignatureSample]
) -> list[DissimilarityVector]:
    """Cross product of references x impostors, labeled between.

    Every impostor must belong to a different writer than every reference.
    """
    ref_writers = {s.writer_id for s in references}
    imp_writers = {s.writer_id for s in impostors}
    overlap = ref_writers & imp_writers
    if overlap:
        raise InputError(f"writer overlap between references and impostors: {sorted(overlap)}")
    out = []
    for r in references:
        for imp in impostors:
            out.append(
                DissimilarityVector(
                    values=dichotomy_transform(r.features, imp.features),
                    klass=KLASS_BETWEEN,
                    query_ref=((r.writer_id, r.sample_id), (imp.writer_id, imp.sample_id)),
                )
            )
    return out


def _writer_sort_key(writer_id: str):
    try:
        return (0, int(writer_id), writer_id)
    except ValueError:
        return (1, 0, writer_id)


@dataclass
class Dataset:
    """Signature samples indexed by writer and label.

    Writer ordering is numeric when every id parses as an integer,
    lexicographic otherwise.
    """

    samples: list[SignatureSample]
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        seen = set()
        dims = set()
        for s in self.samples:
            key = (s.writer_id, s.sample_id)
            if key in seen:
                raise InputError(f"duplicate sample id {key}")
            seen.add(key)
            dims.add(s.dim)
            self._index.setdefault(s.writer_id, {}).setdefault(s.label, []).append(s)
        if len(dims) > 1:
            raise InputError(f"mixed feature dimensions in dataset: {sorted(dims)}")

    @property
    def dim(self) -> int:
        if not self.samples:
            raise InputError("empty dataset has no dimension")
        return self.samples[0].dim

    def writers(self) -> list[str]:
        return sorted(self._index, key=_writer_sort_key)

    def of(self, writer_id: str, label: str) -> list[SignatureSample]:
        return list(self._index.get(writer_id, {}).get(label, []))

    def genuine(self, writer_id: str) -> list[SignatureSample]:
        return self.of(writer_id, LABEL_GENUINE)

    def counts(self, writer_id: str) -> dict[str, int]:
        return {lab: len(self.of(writer_id, lab)) for lab in SAMPLE_LABELS}
