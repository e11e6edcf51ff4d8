"""Error-rate metrics: FRR, FAR per forgery type, AER, and EER under a
global threshold (FRR / FAR_skilled crossing) or per-user thresholds.

Decision rule, fixed project-wide: accept iff fused_score >= threshold.
All rates are percentages in [0, 100].
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import InputError

TRUTH_GENUINE = "genuine"
TRUTH_RANDOM = "random"
TRUTH_SIMPLE = "simple"
TRUTH_SKILLED = "skilled"
FORGERY_TRUTHS = (TRUTH_RANDOM, TRUTH_SIMPLE, TRUTH_SKILLED)

METRIC_FIELDS = (
    "frr",
    "far_random",
    "far_simple",
    "far_skilled",
    "aer",
    "aer_genuine_skilled",
    "eer_global",
    "eer_user",
    "threshold_global",
    "excluded_writers",
)


@dataclass(frozen=True)
class ScoredQuery:
    writer_id: str
    fused_score: float
    truth: str

    def __post_init__(self):
        if self.truth not in (TRUTH_GENUINE,) + FORGERY_TRUTHS:
            raise InputError(f"unknown truth label {self.truth!r}")
        if not np.isfinite(self.fused_score):
            raise InputError("fused_score must be finite")


@dataclass(frozen=True)
class MetricsReport:
    frr: float
    far_random: float | None
    far_simple: float | None
    far_skilled: float
    aer: float
    aer_genuine_skilled: float
    eer_global: float
    eer_user: float
    threshold_global: float
    excluded_writers: int = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def frr(queries: list[ScoredQuery], threshold: float) -> float:
    """Percentage of genuine queries scored below the threshold."""
    scores = [q.fused_score for q in queries if q.truth == TRUTH_GENUINE]
    if not scores:
        raise InputError("no genuine queries")
    return 100.0 * float(np.count_nonzero(np.asarray(scores) < threshold)) / len(scores)


def far(queries: list[ScoredQuery], forgery_type: str, threshold: float) -> float | None:
    """Percentage of forgeries of the given type accepted (score >= threshold).

    Returns None when the query set has no forgeries of that type, so a
    GPDS-style run simply omits FAR_simple.
    """
    if forgery_type not in FORGERY_TRUTHS:
        raise InputError(f"unknown forgery type {forgery_type!r}")
    scores = [q.fused_score for q in queries if q.truth == forgery_type]
    if not scores:
        return None
    return 100.0 * float(np.count_nonzero(np.asarray(scores) >= threshold)) / len(scores)


def threshold_candidates(scores) -> np.ndarray:
    """Distinct observed scores, adjacent midpoints, and range sentinels."""
    s = np.unique(np.asarray(scores, dtype=np.float64))
    if s.size == 0:
        raise InputError("no scores")
    mids = (s[:-1] + s[1:]) / 2.0
    return np.unique(np.concatenate([[s[0] - 1.0], s, mids, [s[-1] + 1.0]]))


def _rates_at(genuine_sorted, forgery_sorted, thresholds):
    ng = genuine_sorted.size
    nf = forgery_sorted.size
    frr_v = 100.0 * np.searchsorted(genuine_sorted, thresholds, side="left") / ng
    far_v = 100.0 * (nf - np.searchsorted(forgery_sorted, thresholds, side="left")) / nf
    return frr_v, far_v


def global_threshold(genuine_scores, forgery_scores) -> float:
    """Threshold at the FRR / FAR crossing.

    Minimizes |FRR - FAR| over all candidate thresholds; ties broken by
    smaller FRR, then by lower threshold.
    """
    g = np.sort(np.asarray(genuine_scores, dtype=np.float64))
    f = np.sort(np.asarray(forgery_scores, dtype=np.float64))
    if g.size == 0 or f.size == 0:
        raise InputError("both score lists must be nonempty")
    cands = threshold_candidates(np.concatenate([g, f]))
    frr_v, far_v = _rates_at(g, f, cands)
    diff = np.abs(frr_v - far_v)
    order = np.lexsort((cands, frr_v, diff))
    return float(cands[order[0]])


def eer(genuine_scores, forgery_scores) -> tuple[float, float]:
    """(EER, threshold): mean of FRR and FAR at the crossing threshold."""
    g = np.sort(np.asarray(genuine_scores, dtype=np.float64))
    f = np.sort(np.asarray(forgery_scores, dtype=np.float64))
    t = global_threshold(g, f)
    frr_v, far_v = _rates_at(g, f, np.array([t]))
    return float((frr_v[0] + far_v[0]) / 2.0), t


def eer_per_user(queries: list[ScoredQuery]) -> tuple[float, int]:
    """Mean of per-writer EERs from each writer's genuine and skilled scores.

    Writers missing either side are excluded; returns (mean EER,
    excluded-writer count). Random and simple forgeries do not
    participate in the user-threshold EER.
    """
    by_writer: dict[str, dict[str, list[float]]] = {}
    for q in queries:
        if q.truth in (TRUTH_GENUINE, TRUTH_SKILLED):
            by_writer.setdefault(q.writer_id, {}).setdefault(q.truth, []).append(q.fused_score)
    values = []
    excluded = 0
    for w in sorted(by_writer):
        g = by_writer[w].get(TRUTH_GENUINE, [])
        s = by_writer[w].get(TRUTH_SKILLED, [])
        if not g or not s:
            excluded += 1
            continue
        values.append(eer(g, s)[0])
    if not values:
        raise InputError("no writer has both genuine and skilled queries")
    return float(np.mean(values)), excluded


def compute_report(queries: list[ScoredQuery]) -> MetricsReport:
    """Full report at the global FRR / FAR_skilled crossing threshold."""
    genuine = [q.fused_score for q in queries if q.truth == TRUTH_GENUINE]
    skilled = [q.fused_score for q in queries if q.truth == TRUTH_SKILLED]
    if not genuine or not skilled:
        raise InputError("report needs both genuine and skilled queries")
    t = global_threshold(genuine, skilled)
    frr_v = frr(queries, t)
    far_r = far(queries, TRUTH_RANDOM, t)
    far_si = far(queries, TRUTH_SIMPLE, t)
    far_sk = far(queries, TRUTH_SKILLED, t)
    present = [frr_v] + [v for v in (far_r, far_si, far_sk) if v is not None]
    eer_g = (frr_v + far_sk) / 2.0
    eer_u, excluded = eer_per_user(queries)
    return MetricsReport(
        frr=frr_v,
        far_random=far_r,
        far_simple=far_si,
        far_skilled=far_sk,
        aer=float(np.mean(present)),
        aer_genuine_skilled=(frr_v + far_sk) / 2.0,
        eer_global=eer_g,
        eer_user=eer_u,
        threshold_global=t,
        excluded_writers=excluded,
    )


def aggregate(reports: list[MetricsReport]) -> dict[str, tuple[float, float] | None]:
    """Per-field mean and sample standard deviation over replications.

    Fields absent from every report stay None; a field present in some
    reports but not others is a rejected input.
    """
    if not reports:
        raise InputError("no reports to aggregate")
    out: dict[str, tuple[float, float] | None] = {}
    for name in METRIC_FIELDS:
        vals = [getattr(r, name) for r in reports]
        if all(v is None for v in vals):
            out[name] = None
            continue
        if any(v is None for v in vals):
            raise InputError(f"field {name} present in only some reports")
        arr = np.asarray(vals, dtype=np.float64)
        std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
        out[name] = (float(np.mean(arr)), std)
    return out


def format_cell(entry: tuple[float, float] | None) -> str:
    """Render one aggregated value as "mean (std)" with two decimals."""
    if entry is None:
        return "—"
    return f"{entry[0]:.2f} ({entry[1]:.2f})"
