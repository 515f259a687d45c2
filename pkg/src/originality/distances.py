"""Distance-matrix construction from feature vectors and raw text."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .energy import DistanceMatrix, as_distance_matrix

EXTRACTION_MODES = ("word_frequency", "char_frequency", "levenshtein")

# Clitics ("charlotte", "'s", "web") and punctuation marks come out as
# standalone tokens; everything is matched on the lowercased text by default.
DEFAULT_TOKEN_PATTERN = r"'s\b|\w+|[^\w\s]"


@dataclass(frozen=True)
class FeatureVectors:
    """N feature rows with unique asset ids."""

    ids: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError("feature rows must form a 2D array")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        ids = tuple(str(i) for i in self.ids)
        object.__setattr__(self, "ids", ids)
        if len(ids) != rows.shape[0]:
            raise ValueError(f"{len(ids)} ids for {rows.shape[0]} feature rows")
        if len(set(ids)) != len(ids):
            duplicate = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"duplicate asset id {duplicate!r}")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class ExtractionScheme:
    """How raw texts turn into geometry."""

    mode: str = "word_frequency"
    lowercase: bool = True
    token_pattern: str = DEFAULT_TOKEN_PATTERN
    include_whitespace: bool = False

    def __post_init__(self):
        if self.mode not in EXTRACTION_MODES:
            raise ValueError(
                f"unknown extraction mode {self.mode!r}; expected one of {EXTRACTION_MODES}"
            )


def euclidean_matrix(vectors) -> DistanceMatrix:
    """Pairwise straight-line distances between feature rows.

    Differences are formed explicitly rather than through the expanded
    dot-product identity, so identical rows land on exactly zero and the
    matrix is exactly symmetric; collision handling downstream relies on both.
    """
    if isinstance(vectors, FeatureVectors):
        ids, rows = vectors.ids, vectors.rows
    else:
        ids, rows = None, np.asarray(vectors, dtype=float)
        if rows.ndim != 2:
            raise ValueError("feature rows must form a 2D array")
    n = rows.shape[0]
    if n < 2:
        raise ValueError("need at least two assets")
    out = np.empty((n, n))
    step = max(1, 4_000_000 // max(1, n * rows.shape[1]))
    for start in range(0, n, step):
        stop = min(n, start + step)
        diff = rows[start:stop, None, :] - rows[None, :, :]
        out[start:stop] = np.sqrt(np.einsum("abk,abk->ab", diff, diff))
    return DistanceMatrix(out, ids=ids)


def normalize_mean(D) -> DistanceMatrix:
    """Divide every entry by the mean off-diagonal distance.

    Coulomb and power-law scores are scale invariant, so this only changes
    the energy bookkeeping, not those scores; screened-potential scores do
    change with scale.
    """
    D = as_distance_matrix(D)
    iu, ju = np.triu_indices(D.n, k=1)
    if iu.size == 0:
        raise ValueError("need at least two assets")
    mean = float(np.mean(D.values[iu, ju]))
    if mean == 0.0:
        raise ValueError("cannot normalize an all-zero distance matrix")
    return DistanceMatrix(D.values / mean, ids=D.ids)


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character insertions, deletions and substitutions."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            substitute = previous[j - 1] if ca == cb else previous[j - 1] + 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, substitute))
        previous = current
    return previous[-1]


def levenshtein_matrix(texts, ids=None) -> DistanceMatrix:
    """Matrix of pairwise edit distances between texts.

    Duplicate texts produce zero distances; whether that is a collision, an
    error or something to dedupe is the scoring layer's call.
    """
    texts = list(texts)
    n = len(texts)
    if n < 2:
        raise ValueError("need at least two texts")
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = float(levenshtein(texts[i], texts[j]))
            out[i, j] = d
            out[j, i] = d
    return DistanceMatrix(out, ids=tuple(ids) if ids is not None else None)


def tokenize(text: str, scheme: ExtractionScheme) -> list[str]:
    """The tokens (word mode) or characters (char mode) a text contributes."""
    if scheme.lowercase:
        text = text.lower()
    if scheme.mode == "char_frequency":
        if scheme.include_whitespace:
            return list(text)
        return [c for c in text if not c.isspace()]
    return re.findall(scheme.token_pattern, text)


def extract_frequency_vectors(texts, scheme: ExtractionScheme | None = None, ids=None) -> FeatureVectors:
    """Relative-frequency vectors over the sorted union basis of observed tokens.

    Each vector is a probability vector: token counts divided by the asset's
    own token total, so short and long texts are comparable.
    """
    if scheme is None:
        scheme = ExtractionScheme()
    if scheme.mode == "levenshtein":
        raise ValueError("levenshtein mode produces a distance matrix, not vectors")
    texts = list(texts)
    if len(texts) < 2:
        raise ValueError("need at least two texts")
    if ids is None:
        ids = tuple(str(i) for i in range(len(texts)))
    counts = []
    for asset_id, text in zip(ids, texts):
        tokens = tokenize(text, scheme)
        if not tokens:
            raise ValueError(f"asset {asset_id!r} is empty after tokenization")
        counts.append(Counter(tokens))
    basis = sorted(set().union(*counts))
    column = {token: i for i, token in enumerate(basis)}
    rows = np.zeros((len(texts), len(basis)))
    for r, counter in enumerate(counts):
        total = sum(counter.values())
        for token, count in counter.items():
            rows[r, column[token]] = count / total
    return FeatureVectors(tuple(ids), rows)


@dataclass(frozen=True)
class ValidationReport:
    """What validate_matrix found; empty tuples mean nothing to report."""

    n: int
    max_asymmetry: float
    nonzero_diagonal: tuple[int, ...]
    negative_entries: tuple[tuple[int, int], ...]
    nonfinite_entries: tuple[tuple[int, int], ...]
    zero_pairs: tuple[tuple[int, int], ...]

    @property
    def structural_ok(self) -> bool:
        """True when scoring machinery can run at all (doubletons aside)."""
        return (
            self.max_asymmetry == 0.0
            and not self.nonzero_diagonal
            and not self.negative_entries
            and not self.nonfinite_entries
        )

    @property
    def clean(self) -> bool:
        return self.structural_ok and not self.zero_pairs

    def issues(self) -> list[str]:
        out = []
        if self.max_asymmetry > 0.0:
            out.append(f"asymmetric entries, max |r_ij - r_ji| = {self.max_asymmetry:g}")
        if self.nonzero_diagonal:
            out.append("nonzero diagonal at " + _index_list(self.nonzero_diagonal))
        if self.negative_entries:
            out.append("negative entries at " + _pair_list(self.negative_entries))
        if self.nonfinite_entries:
            out.append("non-finite entries at " + _pair_list(self.nonfinite_entries))
        if self.zero_pairs:
            out.append("zero-distance pairs (doubletons) at " + _pair_list(self.zero_pairs))
        return out


def validate_matrix(D) -> ValidationReport:
    """Inspect a matrix for the structural invariants scoring relies on."""
    D = as_distance_matrix(D)
    w = D.values
    n = D.n
    off = ~np.eye(n, dtype=bool)
    finite = np.isfinite(w)
    comparable = finite & finite.T
    asymmetry = np.where(comparable, np.abs(w - w.T), 0.0)
    negative = finite & (w < 0) & off
    nonfinite = ~finite & off
    iu, ju = np.triu_indices(n, k=1)
    zeros = ((w == 0.0) | (w.T == 0.0))[iu, ju]
    return ValidationReport(
        n=n,
        max_asymmetry=float(np.max(asymmetry, initial=0.0)),
        nonzero_diagonal=tuple(int(i) for i in np.flatnonzero(np.diag(w) != 0.0)),
        negative_entries=_pairs_of(np.nonzero(negative)),
        nonfinite_entries=_pairs_of(np.nonzero(nonfinite)),
        zero_pairs=tuple(
            (int(a), int(b)) for a, b in zip(iu[zeros], ju[zeros])
        ),
    )


def _pairs_of(where) -> tuple[tuple[int, int], ...]:
    return tuple((int(a), int(b)) for a, b in zip(*where))


def _index_list(indices, limit: int = 8) -> str:
    head = ", ".join(str(i) for i in indices[:limit])
    extra = len(indices) - limit
    return head + (f" and {extra} more" if extra > 0 else "")


def _pair_list(pairs, limit: int = 8) -> str:
    head = ", ".join(f"({a}, {b})" for a, b in pairs[:limit])
    extra = len(pairs) - limit
    return head + (f" and {extra} more" if extra > 0 else "")
