"""Readers and writers for the CSV and JSON interchange formats.

Formats:
  vectors  CSV with header id[,date],v0,...   (date column optional)
  matrix   square CSV, id header row and matching id first column
  texts    one asset per line, or a .csv with header id,text[,date]
  scores   CSV id,score,rank[,flag] or a JSON report with the energy audit
  heatmap  CSV grid, first row y centers, first column x centers

Floats are written with repr (shortest round-trip form) so identical runs
produce byte-identical files; NaN becomes an empty CSV cell or JSON null.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .energy import DistanceMatrix
from .pipeline import Asset, Dataset, HeatmapGrid
from .scores import ScoreReport


def parse_date(text: str) -> datetime:
    """ISO-8601 date or datetime; aware stamps are moved onto naive UTC."""
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError:
        raise ValueError(f"invalid ISO-8601 date {text!r}") from None
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(timezone.utc).replace(tzinfo=None)
    return parsed


def format_float(x: float) -> str:
    if x != x:
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


@contextmanager
def _open_out(target):
    if target is None:
        yield sys.stdout
    elif hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            yield fh


def read_vectors_csv(path) -> Dataset:
    """Dataset from a CSV of feature vectors, optionally dated."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip().lower() != "id":
            raise ValueError(f"{path}: vectors CSV needs an id[,date],v0,... header")
        has_date = len(header) > 1 and header[1].strip().lower() == "date"
        first_value = 2 if has_date else 1
        if len(header) <= first_value:
            raise ValueError(f"{path}: no feature columns")
        assets = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}"
                )
            when = parse_date(row[1]) if has_date and row[1].strip() else None
            try:
                vector = tuple(float(cell) for cell in row[first_value:])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric feature value") from None
            assets.append(Asset(id=row[0].strip(), date=when, vector=vector))
    if len(assets) < 2:
        raise ValueError(f"{path}: need at least two data rows")
    return Dataset(tuple(assets), "vectors")


def read_matrix_csv(path) -> Dataset:
    """Dataset from a square distance-matrix CSV with id headers."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    ids = [cell.strip() for cell in rows[0][1:]]
    n = len(ids)
    if n == 0 or len(rows) - 1 != n:
        raise ValueError(f"{path}: expected a square matrix with an id header row and column")
    values = np.zeros((n, n))
    for i, row in enumerate(rows[1:], start=0):
        if len(row) != n + 1:
            raise ValueError(f"{path}: row {i + 2} has {len(row)} cells, expected {n + 1}")
        if row[0].strip() != ids[i]:
            raise ValueError(
                f"{path}: row label {row[0].strip()!r} does not match column label {ids[i]!r}"
            )
        try:
            values[i] = [float(cell) for cell in row[1:]]
        except ValueError:
            raise ValueError(f"{path}: non-numeric entry in row {ids[i]!r}") from None
    return Dataset.from_matrix(DistanceMatrix(values, ids=tuple(ids)))


def read_texts(path) -> Dataset:
    """Dataset from a text corpus.

    Files ending in .csv are parsed as id,text[,date] with a header row;
    anything else is read line by line, blank lines skipped, with the line
    itself as the asset id (exact repeats get a ' #2' style suffix).
    """
    p = Path(path)
    if p.suffix.lower() == ".csv":
        with open(p, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or [h.strip().lower() for h in header[:2]] != ["id", "text"]:
                raise ValueError(f"{path}: text CSV needs an id,text[,date] header")
            has_date = len(header) > 2 and header[2].strip().lower() == "date"
            assets = []
            for lineno, row in enumerate(reader, start=2):
                if not row or not any(cell.strip() for cell in row):
                    continue
                if len(row) < 2:
                    raise ValueError(f"{path}:{lineno}: expected id,text")
                when = (
                    parse_date(row[2])
                    if has_date and len(row) > 2 and row[2].strip()
                    else None
                )
                assets.append(Asset(id=row[0].strip(), date=when, text=row[1]))
        if len(assets) < 2:
            raise ValueError(f"{path}: need at least two texts")
        return Dataset(tuple(assets), "texts")
    texts = [line for line in p.read_text(encoding="utf-8").splitlines() if line.strip()]
    if len(texts) < 2:
        raise ValueError(f"{path}: need at least two nonempty lines")
    return Dataset.from_texts(texts)


def read_score_csv(path) -> list[tuple[str, float]]:
    """(id, score) pairs from a report CSV; rows with empty scores are skipped."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or [h.strip().lower() for h in header[:2]] != ["id", "score"]:
            raise ValueError(f"{path}: expected an id,score[,rank[,flag]] report CSV")
        out = []
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            cell = row[1].strip() if len(row) > 1 else ""
            if not cell:
                continue
            out.append((row[0], float(cell)))
    return out


def write_matrix_csv(matrix: DistanceMatrix, out=None) -> None:
    ids = matrix.ids or tuple(str(i) for i in range(matrix.n))
    with _open_out(out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *ids])
        for i, row in enumerate(matrix.values):
            writer.writerow([ids[i], *(format_float(v) for v in row)])


def write_score_csv(report: ScoreReport, out=None) -> None:
    ids = report.ids or tuple(str(i) for i in range(len(report.scores)))
    flags = report.flags or (None,) * len(ids)
    with_flags = any(flags)
    with _open_out(out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "score", "rank", "flag"] if with_flags else ["id", "score", "rank"])
        for i, asset_id in enumerate(ids):
            row = [asset_id, format_float(float(report.scores[i])), int(report.ranks[i])]
            if with_flags:
                row.append(flags[i] or "")
            writer.writerow(row)


def report_as_dict(report: ScoreReport) -> dict:
    """JSON-ready structure mirroring the CSV plus the energy audit trail."""
    ids = report.ids or tuple(str(i) for i in range(len(report.scores)))
    flags = report.flags or (None,) * len(ids)
    config = report.config
    assets = []
    for i, asset_id in enumerate(ids):
        entry = {
            "id": asset_id,
            "score": _json_safe(report.scores[i]),
            "rank": int(report.ranks[i]),
        }
        if flags[i]:
            entry["flag"] = flags[i]
        if report.comparands is not None and report.comparands[i] is not None:
            entry["comparands"] = [ids[c] for c in report.comparands[i]]
        assets.append(entry)
    out = {
        "config": {
            "potential": config.potential.label(),
            "variant": config.variant,
            "p": config.p if math.isfinite(config.p) else str(config.p),
            "J": config.J,
            "mean_U": config.mean_U,
            "time_ordered": config.time_ordered,
            "include_self_row": config.include_self_row,
            "collision_policy": config.collision_policy,
        },
        "normalization_residual": _json_safe(report.normalization_residual),
        "assets": assets,
    }
    if report.energies is not None:
        energies = report.energies
        out["energies"] = {
            "total_U": _json_safe(energies.total_U),
            "per_asset_U": [_json_safe(v) for v in energies.per_asset_U],
            "reference_U": [_json_safe(v) for v in energies.reference_U],
            "mean_U": None if energies.mean_U is None else _json_safe(energies.mean_U),
        }
    return out


def write_score_json(report: ScoreReport, out=None) -> None:
    with _open_out(out) as fh:
        json.dump(report_as_dict(report), fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_heatmap_csv(grid: HeatmapGrid, out=None) -> None:
    with _open_out(out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x/y", *(format_float(y) for y in grid.y_centers)])
        for i, x in enumerate(grid.x_centers):
            writer.writerow([format_float(x), *(format_float(v) for v in grid.values[i])])


def write_correlations(stats: dict, out=None, fmt: str = "csv") -> None:
    with _open_out(out) as fh:
        if fmt == "json":
            payload = {
                key: value if isinstance(value, int) else _json_safe(value)
                for key, value in stats.items()
            }
            json.dump(payload, fh, indent=2, allow_nan=False)
            fh.write("\n")
        else:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["statistic", "value"])
            for key, value in stats.items():
                writer.writerow([key, value if isinstance(value, int) else format_float(value)])


def _json_safe(x):
    x = float(x)
    return x if math.isfinite(x) else None
