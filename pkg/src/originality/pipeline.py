"""Dataset plumbing: end-to-end scoring runs, correlations, heatmap grids."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime

import numpy as np

from .distances import (
    ExtractionScheme,
    FeatureVectors,
    euclidean_matrix,
    extract_frequency_vectors,
    levenshtein_matrix,
    normalize_mean,
    validate_matrix,
)
from .energy import DistanceMatrix, as_distance_matrix, potential_matrix, zero_pairs
from .errors import DegenerateInputError, DoubletonError
from .potentials import COULOMB, PotentialSpec, potential_values
from .scores import (
    ScoreConfig,
    ScoreReport,
    rank_descending,
    score_all,
    time_ordered_scores,
)

SOURCE_KINDS = ("vectors", "matrix", "texts")


@dataclass(frozen=True)
class Asset:
    id: str
    date: datetime | None = None
    vector: tuple[float, ...] | None = None
    text: str | None = None


@dataclass(frozen=True)
class Dataset:
    """Uniform container for the three input kinds."""

    assets: tuple[Asset, ...]
    source_kind: str
    matrix: DistanceMatrix | None = None

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(
                f"unknown source kind {self.source_kind!r}; expected one of {SOURCE_KINDS}"
            )
        ids = [a.id for a in self.assets]
        if len(set(ids)) != len(ids):
            duplicate = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"duplicate asset id {duplicate!r}")
        if self.source_kind == "vectors" and any(a.vector is None for a in self.assets):
            raise ValueError("a vectors dataset needs a vector on every asset")
        if self.source_kind == "texts" and any(a.text is None for a in self.assets):
            raise ValueError("a texts dataset needs a text on every asset")
        if self.source_kind == "matrix":
            if self.matrix is None:
                raise ValueError("a matrix dataset needs the matrix itself")
            if self.matrix.n != len(self.assets):
                raise ValueError(
                    f"{self.matrix.n}-asset matrix with {len(self.assets)} assets"
                )

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.assets)

    @property
    def dates(self) -> tuple[datetime | None, ...]:
        return tuple(a.date for a in self.assets)

    @classmethod
    def from_matrix(cls, matrix, ids=None) -> "Dataset":
        matrix = as_distance_matrix(matrix, ids=ids)
        names = matrix.ids or tuple(str(i) for i in range(matrix.n))
        matrix = DistanceMatrix(matrix.values, ids=names)
        return cls(tuple(Asset(id=name) for name in names), "matrix", matrix=matrix)

    @classmethod
    def from_vectors(cls, vectors: FeatureVectors, dates=None) -> "Dataset":
        dates = tuple(dates) if dates is not None else (None,) * vectors.n
        assets = tuple(
            Asset(id=name, date=when, vector=tuple(float(v) for v in row))
            for name, when, row in zip(vectors.ids, dates, vectors.rows)
        )
        return cls(assets, "vectors")

    @classmethod
    def from_texts(cls, texts, ids=None, dates=None) -> "Dataset":
        texts = tuple(texts)
        if ids is None:
            ids = unique_line_ids(texts)
        dates = tuple(dates) if dates is not None else (None,) * len(texts)
        assets = tuple(
            Asset(id=name, date=when, text=text)
            for name, when, text in zip(ids, dates, texts)
        )
        return cls(assets, "texts")


def unique_line_ids(texts) -> tuple[str, ...]:
    """Use each text as its own id, suffixing exact repeats to stay unique."""
    seen: dict[str, int] = {}
    out = []
    for text in texts:
        seen[text] = seen.get(text, 0) + 1
        out.append(text if seen[text] == 1 else f"{text} #{seen[text]}")
    return tuple(out)


def with_day_precision(dataset: Dataset) -> Dataset:
    """Copy of the dataset with dates truncated to midnight."""
    assets = tuple(
        replace(a, date=datetime(a.date.year, a.date.month, a.date.day))
        if a.date is not None
        else a
        for a in dataset.assets
    )
    return Dataset(assets, dataset.source_kind, matrix=dataset.matrix)


def build_matrix(
    dataset: Dataset,
    extraction: ExtractionScheme | None = None,
    normalize: bool = False,
    validate: bool = True,
) -> DistanceMatrix:
    """Construct the distance matrix a dataset describes."""
    if dataset.source_kind == "matrix":
        matrix = dataset.matrix
    elif dataset.source_kind == "vectors":
        rows = np.array([a.vector for a in dataset.assets], dtype=float)
        matrix = euclidean_matrix(FeatureVectors(dataset.ids, rows))
    else:
        if extraction is None:
            raise ValueError("text input needs an extraction scheme")
        texts = [a.text for a in dataset.assets]
        if extraction.mode == "levenshtein":
            prepared = [t.lower() for t in texts] if extraction.lowercase else texts
            matrix = levenshtein_matrix(prepared, ids=dataset.ids)
        else:
            matrix = euclidean_matrix(extract_frequency_vectors(texts, extraction, ids=dataset.ids))
    if validate:
        report = validate_matrix(matrix)
        if not report.structural_ok:
            raise DegenerateInputError("invalid distance matrix: " + "; ".join(report.issues()))
    if normalize:
        matrix = normalize_mean(matrix)
    return matrix


@dataclass(frozen=True)
class PipelineResult:
    """A finished scoring run: the report plus the matrix it was scored on."""

    report: ScoreReport
    matrix: DistanceMatrix
    dropped: tuple[tuple[str, str], ...] = ()


def run_pipeline(
    dataset: Dataset,
    config: ScoreConfig | None = None,
    extraction: ExtractionScheme | None = None,
    *,
    normalize: bool = False,
    dedupe: bool = False,
) -> PipelineResult:
    """Build the matrix, score it, and assemble a full-length report.

    With dedupe enabled, zero-distance groups collapse to one representative
    (earliest date when all members are dated, first occurrence otherwise)
    before scoring; dropped members come back with score 0 and a
    duplicate_of:<id> flag. Energies and the normalization residual then
    describe the deduplicated set.
    """
    if config is None:
        config = ScoreConfig()
    if config.potential.family == "screened" and normalize:
        warnings.warn(
            "screened-potential scores depend on the distance scale; "
            "mean-normalization changes them",
            stacklevel=2,
        )
    matrix = build_matrix(dataset, extraction, normalize=normalize)
    dates = dataset.dates
    n = matrix.n
    kept = list(range(n))
    dropped: list[tuple[int, int]] = []
    if dedupe:
        kept, dropped = _collapse_duplicates(matrix, dates)
    if len(kept) < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    ids = dataset.ids
    sub = DistanceMatrix(
        matrix.values[np.ix_(kept, kept)], ids=tuple(ids[i] for i in kept)
    )
    if config.time_ordered:
        report = time_ordered_scores(sub, [dates[i] for i in kept], config)
    else:
        report = score_all(sub, config)
    if not dropped:
        report = replace(report, ids=ids)
        return PipelineResult(report=report, matrix=matrix)

    position = {original: p for p, original in enumerate(kept)}
    scores = np.zeros(n)
    flags: list[str | None] = [None] * n
    for original, p in position.items():
        scores[original] = report.scores[p]
        if report.flags is not None:
            flags[original] = report.flags[p]
    for duplicate, representative in dropped:
        flags[duplicate] = f"duplicate_of:{ids[representative]}"
    comparands: list[tuple[int, ...] | None] | None = None
    if report.comparands is not None:
        comparands = [None] * n
        for original, p in position.items():
            used = report.comparands[p]
            if used is not None:
                comparands[original] = tuple(kept[i] for i in used)
    full = ScoreReport(
        scores=scores,
        ranks=rank_descending(scores),
        energies=report.energies,
        normalization_residual=report.normalization_residual,
        config=report.config,
        ids=ids,
        flags=tuple(flags),
        comparands=tuple(comparands) if comparands is not None else None,
    )
    return PipelineResult(
        report=full,
        matrix=matrix,
        dropped=tuple((ids[d], ids[r]) for d, r in dropped),
    )


def _collapse_duplicates(matrix: DistanceMatrix, dates):
    parent = list(range(matrix.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in zero_pairs(matrix):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(matrix.n):
        groups.setdefault(find(i), []).append(i)
    kept, dropped = [], []
    for members in groups.values():
        representative = members[0]
        if all(dates[m] is not None for m in members):
            representative = min(members, key=lambda m: (dates[m], m))
        kept.append(representative)
        dropped.extend((m, representative) for m in members if m != representative)
    kept.sort()
    dropped.sort()
    return kept, dropped


def correlations(a, b) -> dict[str, float]:
    """Pearson and Spearman (average-rank ties) correlation coefficients."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError("need two equal-length 1D series")
    if a.size < 3:
        raise ValueError("need at least three observations")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("series contain non-finite values")
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        raise ValueError("correlation is undefined for a constant series")
    return {
        "pearson": _pearson(a, b),
        "spearman": _pearson(_average_ranks(a), _average_ranks(b)),
    }


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    return float(np.dot(da, db) / math.sqrt(np.dot(da, da) * np.dot(db, db)))


def _average_ranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    sorted_x = x[order]
    out = np.arange(1, x.size + 1, dtype=float)
    start = 0
    for i in range(1, x.size + 1):
        if i == x.size or sorted_x[i] != sorted_x[start]:
            out[start:i] = 0.5 * (start + 1 + i)
            start = i
    ranks = np.empty(x.size)
    ranks[order] = out
    return ranks


@dataclass(frozen=True)
class HeatmapGrid:
    """Probe scores on a rectangular grid over fixed 2D points."""

    bounds: tuple[tuple[float, float], tuple[float, float]]
    resolution: tuple[int, int]
    values: np.ndarray

    @property
    def x_centers(self) -> np.ndarray:
        (x0, x1), _ = self.bounds
        nx = self.resolution[0]
        return x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx

    @property
    def y_centers(self) -> np.ndarray:
        _, (y0, y1) = self.bounds
        ny = self.resolution[1]
        return y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny


def heatmap_grid(points, bounds, resolution, spec: PotentialSpec = COULOMB) -> HeatmapGrid:
    """Score a probe asset at every cell center against fixed 2D points.

    Each cell holds the standard score of the probe within the
    (N+1)-asset configuration made of the fixed points plus the probe;
    a probe landing exactly on a fixed point scores 0.
    """
    if isinstance(points, FeatureVectors):
        rows = points.rows
    else:
        rows = np.asarray(points, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != 2:
        raise ValueError("heatmap needs 2D points")
    n = rows.shape[0]
    if n < 2:
        raise ValueError("need at least two fixed points")
    (x0, x1), (y0, y1) = (tuple(float(v) for v in pair) for pair in bounds)
    nx, ny = (int(r) for r in resolution)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("bounds must span a box of positive area")
    if nx < 1 or ny < 1:
        raise ValueError("resolution must be positive in both directions")
    fixed = euclidean_matrix(rows)
    duplicates = zero_pairs(fixed)
    if duplicates:
        raise DoubletonError(duplicates[0][0], duplicates[0][1])
    # The fixed points are the probe's comparands; their ordered potential
    # sum is one shared numerator for every cell.
    comparand_sum = float(np.sum(potential_matrix(fixed, spec)))
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    values = np.empty((nx, ny))

    def fill(span: tuple[int, int]) -> None:
        lo, hi = span
        centers = np.stack(np.meshgrid(xs[lo:hi], ys, indexing="ij"), axis=-1)
        diff = centers[:, :, None, :] - rows[None, None, :, :]
        dist = np.sqrt(np.einsum("xypk,xypk->xyp", diff, diff))
        own = np.sum(potential_values(spec, dist), axis=2)
        values[lo:hi] = comparand_sum / ((n - 1) * own)

    spans = _row_spans(nx, ny, n, max_workers())
    if max_workers() > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=max_workers()) as pool:
            list(pool.map(fill, spans))
    else:
        for span in spans:
            fill(span)
    return HeatmapGrid(((x0, x1), (y0, y1)), (nx, ny), values)


def _row_spans(nx: int, ny: int, n: int, workers: int) -> list[tuple[int, int]]:
    # keep each slab's scratch arrays around 16 MB of doubles
    step = max(1, min(nx, 2_000_000 // max(1, ny * n)))
    if workers > 1:
        step = max(1, min(step, math.ceil(nx / (workers * 4))))
    return [(start, min(nx, start + step)) for start in range(0, nx, step)]


def max_workers() -> int:
    """Parallelism cap from ORIGINALITY_THREADS; defaults to serial."""
    raw = os.environ.get("ORIGINALITY_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
