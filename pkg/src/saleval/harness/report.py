"""Report files: per-record CSV, JSON summary, per-metric ranking CSV.

Everything written here is deterministic: records are sorted before
writing, floats use Python's shortest round-trip repr, and the JSON is
key-sorted. Re-running with the same inputs and seed reproduces the
output byte for byte, and re-parsing the CSV reproduces the records.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .protocol import EvaluationRecord

__all__ = ["RECORD_FIELDS", "emit_report", "read_records"]

RECORD_FIELDS = (
    "model",
    "image",
    "metric",
    "score",
    "blur_sigma",
    "distortion_type",
    "distortion_level",
    "complexity",
    "seed_digest",
)


def _fmt(value) -> str:
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def emit_report(
    records: Sequence[EvaluationRecord],
    rankings,
    tables,
    out_dir,
    config_echo: dict | None = None,
) -> dict[str, Path]:
    """Write records.csv, summary.json and rankings.csv into out_dir.

    config_echo lands verbatim under "config" in the summary so a report
    is always replayable; aggregate tables ride along under "tables".
    Refuses an empty record list.
    """
    if not records:
        raise ValueError("refusing to write a report for zero records")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": out_dir / "records.csv",
        "summary": out_dir / "summary.json",
        "rankings": out_dir / "rankings.csv",
    }

    ordered = sorted(records, key=lambda r: (r.model_id, r.image_id, r.metric_id))
    with open(paths["records"], "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(RECORD_FIELDS)
        for r in ordered:
            writer.writerow(
                [
                    r.model_id,
                    r.image_id,
                    r.metric_id,
                    _fmt(r.score),
                    _fmt(r.blur_sigma),
                    r.distortion_type,
                    r.distortion_level,
                    r.complexity,
                    r.trial_plan_digest,
                ]
            )

    missing: dict[str, int] = {}
    for r in ordered:
        if r.score is None:
            missing[r.metric_id] = missing.get(r.metric_id, 0) + 1
    summary = {
        "config": config_echo or {},
        "n_records": len(ordered),
        "n_missing": sum(missing.values()),
        "missing_by_metric": missing,
        "models": sorted({r.model_id for r in ordered}),
        "metrics": sorted({r.metric_id for r in ordered}),
        "n_images": len({r.image_id for r in ordered}),
        "tables": tables,
    }
    with open(paths["summary"], "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")

    rank_fields = sorted({k for row in rankings for k in row}) if rankings else []
    with open(paths["rankings"], "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(rank_fields)
        for row in rankings:
            writer.writerow([_fmt(row.get(k)) for k in rank_fields])

    return paths


def read_records(path) -> list[EvaluationRecord]:
    """Parse a records.csv back into evaluation records (round-trip exact)."""
    out = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != RECORD_FIELDS:
            raise ValueError(f"{path}: unexpected record CSV header")
        for row in reader:
            out.append(
                EvaluationRecord(
                    model_id=row["model"],
                    image_id=row["image"],
                    metric_id=row["metric"],
                    score=float(row["score"]) if row["score"] else None,
                    blur_sigma=float(row["blur_sigma"]) if row["blur_sigma"] else None,
                    distortion_type=row["distortion_type"],
                    distortion_level=row["distortion_level"],
                    complexity=row["complexity"],
                    trial_plan_digest=row["seed_digest"],
                )
            )
    return out
