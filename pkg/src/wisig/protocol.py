"""Dataset partition recipes, seeded replications, and experiment runs.

The partition presets mirror the published evaluation protocols for the
Brazilian PUC-PR and GPDS datasets; the synthetic kind is a desk-scale
stand-in with the same shape. RNG discipline: one root seed, and every
(cell, replication, purpose) triple gets its own counter-derived
substream, so adding sweep values never perturbs other cells.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import fusion, metrics, svm
from .core import (
    LABEL_GENUINE,
    LABEL_SIMPLE,
    LABEL_SKILLED,
    Dataset,
    DissimilarityVector,
    SignatureSample,
    between_pairs,
    dichotomy_transform,
    within_pairs,
)
from .errors import InputError, ProtocolError

DATASET_KINDS = ("brazilian", "gpds160", "gpds300", "synthetic")


def substream(seed: int, *keys) -> np.random.Generator:
    """Deterministic RNG substream keyed by (seed, *keys).

    String keys are hashed with crc32; integer keys pass through.
    """
    words = [np.uint32(seed & 0xFFFFFFFF), np.uint32((seed >> 32) & 0xFFFFFFFF)]
    for k in keys:
        if isinstance(k, str):
            words.append(np.uint32(zlib.crc32(k.encode("utf-8"))))
        else:
            words.append(np.uint32(int(k) & 0xFFFFFFFF))
    return np.random.default_rng(np.random.SeedSequence([int(w) for w in words]))


@dataclass(frozen=True)
class ProtocolConfig:
    """Partition recipe: writer ranges, pair-generation counts, query mix."""

    dataset_kind: str
    development_writers: tuple[int, int]  # inclusive id range
    exploitation_writers: tuple[int, int]
    m_genuine_for_within: int
    refs_for_between: int
    impostors_per_writer: int
    reference_size: int
    q_genuine: int = 10
    q_simple: int = 0
    q_skilled: int = 10
    q_random: int = 10
    n_reference_sweep: tuple[int, ...] = ()
    fusion_rule: str = "max"
    replications: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.dataset_kind not in DATASET_KINDS:
            raise InputError(f"unknown dataset kind {self.dataset_kind!r}")
        d0, d1 = self.development_writers
        e0, e1 = self.exploitation_writers
        if max(d0, e0) <= min(d1, e1):
            raise InputError("development and exploitation ranges overlap")
        if self.refs_for_between >= self.m_genuine_for_within:
            raise InputError("refs_for_between must be < m_genuine_for_within")
        if self.fusion_rule not in fusion.FUSION_RULES:
            raise InputError(f"unknown fusion rule {self.fusion_rule!r}")


_PRESETS = {
    "brazilian": dict(
        development_writers=(61, 168),
        exploitation_writers=(1, 60),
        m_genuine_for_within=30,
        refs_for_between=29,
        impostors_per_writer=15,
        reference_size=30,
        q_simple=10,
        n_reference_sweep=(1, 5, 10, 15, 20, 25, 30),
    ),
    "gpds160": dict(
        development_writers=(161, 881),
        exploitation_writers=(1, 160),
        m_genuine_for_within=12,
        refs_for_between=11,
        impostors_per_writer=6,
        reference_size=12,
        n_reference_sweep=(1, 5, 10, 12),
    ),
    "gpds300": dict(
        development_writers=(301, 881),
        exploitation_writers=(1, 300),
        m_genuine_for_within=12,
        refs_for_between=11,
        impostors_per_writer=6,
        reference_size=12,
        n_reference_sweep=(1, 5, 10, 12),
    ),
}


def config_for(kind: str, seed: int = 0, **overrides) -> ProtocolConfig:
    """Preset ProtocolConfig for a dataset kind; synthetic needs ranges."""
    if kind in _PRESETS:
        params = dict(_PRESETS[kind])
        params.update(overrides)
        return ProtocolConfig(dataset_kind=kind, seed=seed, **params)
    if kind == "synthetic":
        params = dict(
            m_genuine_for_within=12,
            refs_for_between=11,
            impostors_per_writer=6,
            reference_size=12,
            n_reference_sweep=(1, 5, 10, 12),
        )
        params.update(overrides)
        return ProtocolConfig(dataset_kind=kind, seed=seed, **params)
    raise InputError(f"unknown dataset kind {kind!r}")


def _writer_int(writer_id: str) -> int | None:
    try:
        return int(writer_id)
    except ValueError:
        return None


def writers_in_range(dataset: Dataset, id_range: tuple[int, int]) -> list[str]:
    """Writers whose id falls in the inclusive range.

    Numeric ids are matched by value; non-numeric ids by 1-based position
    in sorted order (the explicit id table).
    """
    writers = dataset.writers()
    lo, hi = id_range
    if all(_writer_int(w) is not None for w in writers):
        return [w for w in writers if lo <= _writer_int(w) <= hi]
    return [w for i, w in enumerate(writers, start=1) if lo <= i <= hi]


def build_learning_set(
    dataset: Dataset, config: ProtocolConfig, rng: np.random.Generator
) -> list[DissimilarityVector]:
    """Balanced within/between learning set over development writers.

    Per writer: C(m, 2) within pairs from m selected genuines, and
    refs_for_between references against one genuine signature of each of
    impostors_per_writer other development writers.
    """
    dev = writers_in_range(dataset, config.development_writers)
    if not dev:
        raise ProtocolError("no development writers in range")
    m = config.m_genuine_for_within
    if len(dev) - 1 < config.impostors_per_writer:
        raise ProtocolError(
            f"need {config.impostors_per_writer} impostor writers, have {len(dev) - 1}"
        )
    out: list[DissimilarityVector] = []
    for w in dev:
        genuine = dataset.genuine(w)
        if len(genuine) < m:
            raise ProtocolError(f"writer {w} has {len(genuine)} genuine samples, needs {m}")
        sel_idx = rng.choice(len(genuine), size=m, replace=False)
        selected = [genuine[i] for i in sel_idx]
        out.extend(within_pairs(selected))
        refs = selected[: config.refs_for_between]
        others = [v for v in dev if v != w]
        imp_idx = rng.choice(len(others), size=config.impostors_per_writer, replace=False)
        impostors = []
        for i in imp_idx:
            imp_genuine = dataset.genuine(others[i])
            if not imp_genuine:
                raise ProtocolError(f"writer {others[i]} has no genuine samples")
            impostors.append(imp_genuine[rng.integers(len(imp_genuine))])
        out.extend(between_pairs(refs, impostors))
    return out


def build_reference_and_questioned(
    dataset: Dataset, config: ProtocolConfig, rng: np.random.Generator
) -> tuple[dict[str, list[SignatureSample]], list[tuple[str, str, SignatureSample]]]:
    """Reference map and questioned list over exploitation writers.

    Questioned entries are (claimed_writer, truth, sample) with truth in
    {genuine, random, simple, skilled}; reference genuines never reappear
    as questioned genuines.
    """
    expl = writers_in_range(dataset, config.exploitation_writers)
    if not expl:
        raise ProtocolError("no exploitation writers in range")
    if len(expl) - 1 < config.q_random and config.q_random > 0:
        raise ProtocolError(
            f"need {config.q_random} distinct impostor writers, have {len(expl) - 1}"
        )
    references: dict[str, list[SignatureSample]] = {}
    questioned: list[tuple[str, str, SignatureSample]] = []
    for w in expl:
        genuine = dataset.genuine(w)
        need = config.reference_size + config.q_genuine
        if len(genuine) < need:
            raise ProtocolError(f"writer {w} has {len(genuine)} genuine samples, needs {need}")
        perm = rng.permutation(len(genuine))
        references[w] = [genuine[i] for i in perm[: config.reference_size]]
        for i in perm[config.reference_size : config.reference_size + config.q_genuine]:
            questioned.append((w, metrics.TRUTH_GENUINE, genuine[i]))
        for label, truth, count in (
            (LABEL_SIMPLE, metrics.TRUTH_SIMPLE, config.q_simple),
            (LABEL_SKILLED, metrics.TRUTH_SKILLED, config.q_skilled),
        ):
            if count == 0:
                continue
            pool = dataset.of(w, label)
            if len(pool) < count:
                raise ProtocolError(f"writer {w} has {len(pool)} {label} forgeries, needs {count}")
            for i in rng.choice(len(pool), size=count, replace=False):
                questioned.append((w, truth, pool[i]))
        if config.q_random > 0:
            others = [v for v in expl if v != w]
            for i in rng.choice(len(others), size=config.q_random, replace=False):
                donor_genuine = dataset.genuine(others[i])
                sample = donor_genuine[rng.integers(len(donor_genuine))]
                questioned.append((w, metrics.TRUTH_RANDOM, sample))
    return references, questioned


def verify_query(
    model: svm.WiSvmModel,
    references: list[SignatureSample],
    query: SignatureSample,
    rule: str,
    n_reference: int,
    rng: np.random.Generator,
) -> float:
    """Fused decision score of one questioned signature.

    Samples n_reference references without replacement (all of them when
    n_reference equals the pool size), scores the dichotomy-transformed
    pairs, and fuses with the given rule.
    """
    if n_reference < 1:
        raise InputError("n_reference must be >= 1")
    if n_reference > len(references):
        raise InputError(f"n_reference {n_reference} exceeds {len(references)} references")
    if n_reference == len(references):
        subset = references
    else:
        idx = np.sort(rng.choice(len(references), size=n_reference, replace=False))
        subset = [references[i] for i in idx]
    X = np.stack([dichotomy_transform(query.features, r.features) for r in subset])
    return fusion.fuse(svm.decision_scores(model, X), rule)


@dataclass(frozen=True)
class ExperimentPlan:
    """Cross product of n_reference sweep x fusion rules x replications."""

    config: ProtocolConfig
    fusion_rules: tuple[str, ...] = ()
    svm_config: svm.SvmConfig = field(default_factory=svm.SvmConfig)

    def cells(self) -> list[tuple[str, int]]:
        rules = self.fusion_rules or (self.config.fusion_rule,)
        sweep = self.config.n_reference_sweep or (self.config.reference_size,)
        return [(rule, int(n)) for rule in rules for n in sweep]


@dataclass(frozen=True)
class CellResult:
    fusion_rule: str
    n_reference: int
    reports: tuple[metrics.MetricsReport, ...]
    summary: dict


def run_cell(
    dataset: Dataset,
    config: ProtocolConfig,
    rule: str,
    n_reference: int,
    svm_config: svm.SvmConfig,
    model: svm.WiSvmModel | None = None,
) -> CellResult:
    """One (rule, n_reference) cell: per-replication selection, training
    (unless a pre-trained model is supplied), scoring, and aggregation."""
    reports = []
    for rep in range(config.replications):
        keys = (rule, n_reference, rep)
        if model is None:
            learn_rng = substream(config.seed, *keys, "learning")
            learning_set = build_learning_set(dataset, config, learn_rng)
            rep_model = svm.train(learning_set, svm_config)
        else:
            rep_model = model
        rq_rng = substream(config.seed, *keys, "refq")
        references, questioned = build_reference_and_questioned(dataset, config, rq_rng)
        sel_rng = substream(config.seed, *keys, "refselect")
        scored = [
            metrics.ScoredQuery(
                writer_id=w,
                fused_score=verify_query(
                    rep_model, references[w], sample, rule, n_reference, sel_rng
                ),
                truth=truth,
            )
            for w, truth, sample in questioned
        ]
        reports.append(metrics.compute_report(scored))
    return CellResult(
        fusion_rule=rule,
        n_reference=n_reference,
        reports=tuple(reports),
        summary=metrics.aggregate(reports),
    )


def run_experiment(
    plan: ExperimentPlan, dataset: Dataset, model: svm.WiSvmModel | None = None
) -> list[CellResult]:
    """All plan cells in deterministic (rule, n_reference) order.

    Cell failures propagate annotated with the cell coordinates.
    """
    results = []
    for rule, n_ref in plan.cells():
        try:
            results.append(run_cell(dataset, plan.config, rule, n_ref, plan.svm_config, model))
        except Exception as exc:
            raise type(exc)(f"cell (rule={rule}, n_reference={n_ref}): {exc}") from exc
    return results


def generate_synthetic(
    n_writers: int,
    m_per_writer: int,
    dim: int,
    separation: float = 10.0,
    skilled_offset: float = 3.0,
    n_simple: int = 10,
    n_skilled: int = 10,
    noise: float = 1.0,
    rng_seed: int = 0,
) -> Dataset:
    """Gaussian-cluster stand-in for CNN signature features.

    Per writer: a centroid uniform in [0, separation]^dim; genuine
    samples are centroid + isotropic noise; skilled forgeries use noise
    scaled by (1 + skilled_offset), so offset 0 makes them
    distributionally identical to genuine; simple forgeries start from
    another writer's style displaced partway toward the target centroid.
    """
    if dim < 1:
        raise InputError("dim must be >= 1")
    if n_writers < 1 or m_per_writer < 1:
        raise InputError("n_writers and m_per_writer must be >= 1")
    rng = substream(rng_seed, "synthetic")
    centroids = rng.uniform(0.0, separation, size=(n_writers, dim))
    samples: list[SignatureSample] = []
    for w in range(n_writers):
        wid = str(w + 1)
        for s in range(m_per_writer):
            feats = centroids[w] + noise * rng.standard_normal(dim)
            samples.append(SignatureSample(wid, f"g{s + 1}", LABEL_GENUINE, feats))
        for s in range(n_skilled):
            feats = centroids[w] + noise * (1.0 + skilled_offset) * rng.standard_normal(dim)
            samples.append(SignatureSample(wid, f"k{s + 1}", LABEL_SKILLED, feats))
        for s in range(n_simple):
            donor = (w + 1 + int(rng.integers(n_writers - 1))) % n_writers if n_writers > 1 else w
            base = centroids[donor] + 0.3 * (centroids[w] - centroids[donor])
            feats = base + noise * rng.standard_normal(dim)
            samples.append(SignatureSample(wid, f"s{s + 1}", LABEL_SIMPLE, feats))
    return Dataset(samples)
