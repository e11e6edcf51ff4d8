"""File ingestion and report emission.

Feature interchange is CSV with header ``writer_id,sample_id,label,f0,...``;
reports go out as a fixed-column text table ("mean (std)" cells) or as
line-delimited JSON with the canonical metric field names.
"""

from __future__ import annotations

import json
import math

from .core import Dataset, SignatureSample
from .errors import InputError, ParseError
from .metrics import METRIC_FIELDS, format_cell
from .protocol import CellResult

_LABELS = {"genuine", "simple", "skilled"}

TABLE_COLUMNS = (
    ("frr", "FRR"),
    ("far_random", "FAR_random"),
    ("far_simple", "FAR_simple"),
    ("far_skilled", "FAR_skilled"),
    ("aer", "AER"),
    ("aer_genuine_skilled", "AER_gen+skilled"),
    ("eer_global", "EER_global"),
    ("eer_user", "EER_user"),
)


def load_features(path, expected_dim: int | None = None) -> Dataset:
    """Parse a feature CSV into a Dataset.

    Rejects ragged rows, unknown labels, non-finite values, and duplicate
    (writer_id, sample_id) pairs; parse errors carry a 1-based line number.
    """
    samples = []
    seen = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline()
        if not header:
            raise ParseError("empty file", line=1)
        cols = [c.strip() for c in header.rstrip("\r\n").split(",")]
        if cols[:3] != ["writer_id", "sample_id", "label"]:
            raise ParseError(f"bad header, expected writer_id,sample_id,label,f0,...; got {cols[:3]}", line=1)
        dim = len(cols) - 3
        if dim < 1:
            raise ParseError("header declares no feature columns", line=1)
        if expected_dim is not None and dim != expected_dim:
            raise ParseError(f"dim {dim} does not match expected {expected_dim}", line=1)
        for lineno, raw in enumerate(fh, start=2):
            if not raw.strip():
                continue
            parts = raw.rstrip("\r\n").split(",")
            if len(parts) != dim + 3:
                raise ParseError(f"ragged row: {len(parts)} fields, expected {dim + 3}", line=lineno)
            writer_id, sample_id, label = parts[0].strip(), parts[1].strip(), parts[2].strip()
            if label not in _LABELS:
                raise ParseError(f"unknown label {label!r}", line=lineno)
            key = (writer_id, sample_id)
            if key in seen:
                raise ParseError(f"duplicate sample id {key}", line=lineno)
            seen.add(key)
            try:
                values = [float(v) for v in parts[3:]]
            except ValueError as exc:
                raise ParseError(f"bad numeric value: {exc}", line=lineno) from exc
            if not all(math.isfinite(v) for v in values):
                raise ParseError("non-finite feature value", line=lineno)
            samples.append(SignatureSample(writer_id, sample_id, label, values))
    if not samples:
        raise ParseError("file has a header but no data rows", line=2)
    return Dataset(samples)


def save_features(dataset: Dataset, path) -> None:
    """Write the CSV interchange format; load(save(d)) round-trips."""
    dim = dataset.dim
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("writer_id,sample_id,label," + ",".join(f"f{i}" for i in range(dim)) + "\n")
        for s in dataset.samples:
            row = [s.writer_id, s.sample_id, s.label] + [repr(float(v)) for v in s.features]
            fh.write(",".join(row) + "\n")


def render_table(results: list[CellResult]) -> str:
    """Fixed-column table, one row per experiment cell."""
    if not results:
        raise InputError("no results to render")
    header = ["Rule", "N_ref"] + [title for _, title in TABLE_COLUMNS]
    rows = [header]
    for r in results:
        row = [r.fusion_rule, str(r.n_reference)]
        row += [format_cell(r.summary[name]) for name, _ in TABLE_COLUMNS]
        rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for k, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_machine(results: list[CellResult]) -> str:
    """Line-delimited JSON, one object per cell, canonical field names."""
    if not results:
        raise InputError("no results to render")
    lines = []
    for r in results:
        obj = {"fusion_rule": r.fusion_rule, "n_reference": r.n_reference}
        for name in METRIC_FIELDS:
            entry = r.summary[name]
            obj[name] = None if entry is None else {"mean": entry[0], "std": entry[1]}
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"


def write_report(results: list[CellResult], path, format: str = "table") -> None:
    if format not in ("table", "machine"):
        raise InputError(f"unknown report format {format!r}")
    text = render_table(results) if format == "table" else render_machine(results)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_machine_report(path) -> list[dict]:
    """Parse a machine-format report back to dicts (round-trip of render)."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                out.append(json.loads(raw))
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON: {exc}", line=lineno) from exc
    if not out:
        raise ParseError("empty report", line=1)
    return out


def read_plan(path) -> dict:
    """Parse a key = value plan file; '#' starts a comment.

    List-valued keys (n_reference_sweep, fusion_rules) are comma-separated.
    """
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key = value, got {line!r}", line=lineno)
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ParseError("empty key", line=lineno)
            out[key] = value
    return out
