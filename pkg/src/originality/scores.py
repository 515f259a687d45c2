"""Originality scores and their variants.

The standard score of asset k is its reference energy divided by its own
energy: 1 means the asset sits at an average remove from the rest, values
above 1 mean it is more isolated than a typical comparand pair, values below
1 mean it crowds its neighbours. Equivalently it is the harmonic mean of k's
distances divided by the harmonic mean of the comparand-pair distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .energy import (
    EnergyBreakdown,
    DistanceMatrix,
    as_distance_matrix,
    asset_energy,
    energy_breakdown,
    reference_energy,
    zero_pairs,
)
from .errors import CollisionError, DegenerateInputError, DoubletonError
from .potentials import COULOMB, PotentialSpec, potential_values

VARIANTS = ("standard", "bounded", "generalized_mean", "j_nearest", "mean_energy")
COLLISION_POLICIES = ("score_zero", "error")


@dataclass(frozen=True)
class ScoreConfig:
    """Which score to compute and how to treat degenerate geometry."""

    potential: PotentialSpec = COULOMB
    variant: str = "standard"
    p: float = -1.0
    J: int = 1
    mean_U: float | None = None
    time_ordered: bool = False
    include_self_row: bool = False
    collision_policy: str = "score_zero"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.collision_policy not in COLLISION_POLICIES:
            raise ValueError(
                f"unknown collision policy {self.collision_policy!r}; "
                f"expected one of {COLLISION_POLICIES}"
            )
        if self.variant == "generalized_mean" and (math.isnan(self.p) or self.p > 0):
            raise ValueError("generalized-mean exponent p must be <= 0")
        if self.variant == "j_nearest" and (int(self.J) != self.J or self.J < 1):
            raise ValueError("J must be an integer >= 1")
        if self.variant == "mean_energy" and self.mean_U is None:
            raise ValueError("the mean_energy variant needs mean_U")
        if self.mean_U is not None and not self.mean_U > 0:
            raise ValueError("mean_U must be positive")


@dataclass(frozen=True)
class ScoreReport:
    """Scores plus everything needed to audit them.

    flags marks assets whose score is not a plain evaluation ("unscorable",
    "duplicate_of:<id>"); comparands records the per-asset comparand sets in
    time-ordered runs.
    """

    scores: np.ndarray
    ranks: np.ndarray
    energies: EnergyBreakdown | None
    normalization_residual: float
    config: ScoreConfig
    ids: tuple[str, ...] | None = None
    flags: tuple[str | None, ...] | None = None
    comparands: tuple[tuple[int, ...] | None, ...] | None = None


def rank_descending(scores) -> np.ndarray:
    """1-based ranks, highest score first; ties and NaNs fall back to index order."""
    scores = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(scores.size), -scores))
    ranks = np.empty(scores.size, dtype=int)
    ranks[order] = np.arange(1, scores.size + 1)
    return ranks


def normalization_residual(scores) -> float:
    """Sum of 1/((N-2) O_k + 2) minus 1; zero in exact arithmetic."""
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    return float(np.sum(1.0 / ((n - 2) * scores + 2.0)) - 1.0)


def score_asset(D, spec: PotentialSpec, k: int, collision_policy: str = "score_zero") -> float:
    """Standard score of asset k: reference energy over own energy."""
    _check_policy(collision_policy)
    D = as_distance_matrix(D)
    ref = reference_energy(D, spec, k)
    try:
        own = asset_energy(D, spec, k)
    except CollisionError:
        if collision_policy == "score_zero":
            return 0.0
        raise
    return ref / own


def score_vs_mean_energy(
    D, spec: PotentialSpec, k: int, mean_U: float, collision_policy: str = "score_zero"
) -> float:
    """mean_U / U_k, the reciprocal of the asset's surprisal."""
    _check_policy(collision_policy)
    if not mean_U > 0:
        raise ValueError("mean energy must be positive")
    try:
        own = asset_energy(D, spec, k)
    except CollisionError:
        if collision_policy == "score_zero":
            return 0.0
        raise
    return mean_U / own


def bounded_score(o):
    """Map score o to o/(1+o) in [0, 1); monotone, so rankings are unchanged."""
    arr = np.asarray(o, dtype=float)
    if np.any(arr < 0):
        raise ValueError("scores must be nonnegative")
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(arr), 1.0, arr / (1.0 + arr))
    if np.ndim(o) == 0:
        return float(out)
    return out


def generalized_mean_score(D, p: float, k: int, collision_policy: str = "score_zero"):
    """Ratio of the p-mean of k's distances to the p-mean of comparand distances.

    p = -1 reproduces the standard coulomb score, p = 0 compares geometric
    means, p = -inf compares minimum distances.
    """
    _check_policy(collision_policy)
    if math.isnan(p) or p > 0:
        raise ValueError("generalized-mean exponent p must be <= 0")
    D = as_distance_matrix(D)
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    k = _index(k, n)
    keep = np.flatnonzero(np.arange(n) != k)
    row = D.values[k][keep]
    sub = D.values[np.ix_(keep, keep)]
    iu, ju = np.triu_indices(n - 1, k=1)
    comparand = sub[iu, ju]
    zeros = np.flatnonzero(comparand == 0.0)
    if zeros.size:
        a, b = iu[zeros[0]], ju[zeros[0]]
        raise DoubletonError(int(keep[a]), int(keep[b]), ids=D.ids)
    hits = np.flatnonzero(row == 0.0)
    if hits.size:
        if collision_policy == "score_zero":
            return 0.0
        raise CollisionError(k, int(keep[hits[0]]), ids=D.ids)
    return _power_mean(row, p) / _power_mean(comparand, p)


def j_nearest_score(
    D,
    spec: PotentialSpec,
    k: int,
    J: int,
    include_self_row: bool = False,
    collision_policy: str = "score_zero",
) -> float:
    """Score restricted to each asset's J closest neighbours.

    Every row contributes the potential sum over its J smallest off-diagonal
    distances. The numerator averages those sums over rows i != k by default;
    include_self_row adds row k itself (the literal all-rows reading). Either
    way the prefactor is 1/(N-1).
    """
    _check_policy(collision_policy)
    D = as_distance_matrix(D)
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    k = _index(k, n)
    J = int(J)
    if not 1 <= J <= n - 2:
        raise ValueError(f"J must be in [1, {n - 2}] for {n} assets")
    colliding = [pair for pair in zero_pairs(D) if k in pair]
    doubletons = [pair for pair in zero_pairs(D) if k not in pair]
    if doubletons:
        raise DoubletonError(doubletons[0][0], doubletons[0][1], ids=D.ids)
    if colliding:
        if collision_policy == "score_zero":
            return 0.0
        i, j = colliding[0]
        raise CollisionError(k, j if i == k else i, ids=D.ids)
    off = D.values[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    nearest = np.sort(off, axis=1)[:, :J]
    sums = np.sum(potential_values(spec, nearest), axis=1)
    numerator = np.sum(sums) if include_self_row else np.sum(sums) - sums[k]
    return float(numerator / ((n - 1) * sums[k]))


def score_all(D, config: ScoreConfig | None = None) -> ScoreReport:
    """Score every asset under the configured variant.

    Any zero-distance pair aborts batch scoring: whichever two assets collide
    are a comparand doubleton from every third asset's point of view, so no
    collision policy can make the whole report well defined. Dedupe upstream
    (pipeline) or score single assets instead.
    """
    D = as_distance_matrix(D)
    if config is None:
        config = ScoreConfig()
    if config.time_ordered:
        raise ValueError("time-ordered scoring needs dates; call time_ordered_scores")
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    pairs = zero_pairs(D)
    if pairs:
        raise DoubletonError(pairs[0][0], pairs[0][1], ids=D.ids)
    if config.variant == "j_nearest" and not 1 <= config.J <= n - 2:
        raise ValueError(f"J must be in [1, {n - 2}] for {n} assets")

    energies = energy_breakdown(D, config.potential, mean_U=config.mean_U)
    standard = energies.reference_U / energies.per_asset_U
    if config.variant == "standard":
        scores = standard
    elif config.variant == "bounded":
        scores = bounded_score(standard)
    elif config.variant == "mean_energy":
        scores = config.mean_U / energies.per_asset_U
    elif config.variant == "generalized_mean":
        scores = np.array([generalized_mean_score(D, config.p, k) for k in range(n)])
    else:
        scores = np.array(
            [
                j_nearest_score(
                    D, config.potential, k, config.J, include_self_row=config.include_self_row
                )
                for k in range(n)
            ]
        )
    return ScoreReport(
        scores=scores,
        ranks=rank_descending(scores),
        energies=energies,
        normalization_residual=normalization_residual(standard),
        config=config,
        ids=D.ids,
    )


def time_ordered_scores(D, dates, config: ScoreConfig | None = None) -> ScoreReport:
    """Score each asset against its strictly earlier-dated comparands only.

    Assets with fewer than two earlier comparands (J+1 for j_nearest) are
    flagged "unscorable" and carry NaN, ranked after everything else; assets
    sharing a date are never comparands of each other. The normalization
    residual does not apply across differing comparand sets and is NaN.
    """
    D = as_distance_matrix(D)
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    if config is None:
        config = ScoreConfig()
    config = replace(config, time_ordered=True)
    dates = list(dates)
    if len(dates) != n:
        raise ValueError(f"{len(dates)} dates for {n} assets")
    if any(d is None for d in dates):
        raise ValueError("time-ordered scoring needs a date for every asset")

    minimum = config.J + 1 if config.variant == "j_nearest" else 2
    scores = np.full(n, math.nan)
    flags: list[str | None] = [None] * n
    comparands: list[tuple[int, ...] | None] = [None] * n
    for k in range(n):
        earlier = [i for i in range(n) if dates[i] < dates[k]]
        if len(earlier) < minimum:
            flags[k] = "unscorable"
            continue
        indices = earlier + [k]
        sub = DistanceMatrix(
            D.values[np.ix_(indices, indices)],
            ids=tuple(D.label(i) for i in indices) if D.ids is not None else None,
        )
        comparands[k] = tuple(earlier)
        scores[k] = _single_score(sub, config, len(indices) - 1)
    return ScoreReport(
        scores=scores,
        ranks=rank_descending(scores),
        energies=None,
        normalization_residual=math.nan,
        config=config,
        ids=D.ids,
        flags=tuple(flags),
        comparands=tuple(comparands),
    )


def _single_score(D: DistanceMatrix, config: ScoreConfig, k: int) -> float:
    if config.variant == "generalized_mean":
        return generalized_mean_score(D, config.p, k, collision_policy=config.collision_policy)
    if config.variant == "j_nearest":
        return j_nearest_score(
            D,
            config.potential,
            k,
            config.J,
            include_self_row=config.include_self_row,
            collision_policy=config.collision_policy,
        )
    if config.variant == "mean_energy":
        return score_vs_mean_energy(
            D, config.potential, k, config.mean_U, collision_policy=config.collision_policy
        )
    score = score_asset(D, config.potential, k, collision_policy=config.collision_policy)
    if config.variant == "bounded":
        return bounded_score(score)
    return score


def _power_mean(values: np.ndarray, p: float) -> float:
    # values strictly positive, p <= 0; the smallest value is factored out so
    # that large negative exponents cannot overflow
    if p == 0.0:
        return float(np.exp(np.mean(np.log(values))))
    if math.isinf(p):
        return float(np.min(values))
    scale = float(np.min(values))
    return scale * float(np.mean((values / scale) ** p)) ** (1.0 / p)


def _check_policy(policy: str) -> None:
    if policy not in COLLISION_POLICIES:
        raise ValueError(
            f"unknown collision policy {policy!r}; expected one of {COLLISION_POLICIES}"
        )


def _index(k: int, n: int) -> int:
    k = int(k)
    if not 0 <= k < n:
        raise IndexError(f"asset index {k} out of range for {n} assets")
    return k
