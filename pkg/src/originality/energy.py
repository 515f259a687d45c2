"""Interaction energies of a set of mutually repelling assets.

The total energy is the sum of the pair potential over unordered pairs. It
partitions into per-asset halves U_k, and each asset also gets a reference
energy built from its comparands only, rescaled so that an asset in an
"average" position has U_k equal to the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError, DegenerateInputError, DoubletonError
from .potentials import PotentialSpec, potential_values


@dataclass(frozen=True)
class DistanceMatrix:
    """Square pairwise-distance matrix with optional asset labels.

    Construction only enforces shape; content checks (symmetry, zero
    diagonal, finiteness) live in distances.validate_matrix so that broken
    input can be inspected instead of rejected unseen.
    """

    values: np.ndarray
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.ids is not None:
            ids = tuple(str(i) for i in self.ids)
            if len(ids) != values.shape[0]:
                raise ValueError(f"{len(ids)} ids for a {values.shape[0]}-asset matrix")
            object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def label(self, k: int) -> str:
        return self.ids[k] if self.ids is not None else f"#{k}"


def as_distance_matrix(obj, ids=None) -> DistanceMatrix:
    """Coerce an array-like (or pass a DistanceMatrix through)."""
    if isinstance(obj, DistanceMatrix):
        return obj
    return DistanceMatrix(np.asarray(obj, dtype=float), ids=ids)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Total energy with its per-asset and per-reference partition."""

    total_U: float
    per_asset_U: np.ndarray
    reference_U: np.ndarray
    mean_U: float | None = None


def zero_pairs(D: DistanceMatrix) -> list[tuple[int, int]]:
    """Asset pairs (i < j) at exactly zero distance."""
    iu, ju = np.triu_indices(D.n, k=1)
    hits = D.values[iu, ju] == 0.0
    return list(zip(iu[hits].tolist(), ju[hits].tolist()))


def potential_matrix(D: DistanceMatrix, spec: PotentialSpec) -> np.ndarray:
    """u(r_ij) for every pair, zero diagonal, +inf at zero distances."""
    u = potential_values(spec, D.values)
    np.fill_diagonal(u, 0.0)
    return u


def total_energy(D, spec: PotentialSpec) -> float:
    """U = (1/2) sum of u(r_ij) over ordered pairs i != j."""
    D = as_distance_matrix(D)
    if D.n < 2:
        raise DegenerateInputError("at least two assets required")
    pairs = zero_pairs(D)
    if pairs:
        raise CollisionError(pairs[0][0], pairs[0][1], ids=D.ids)
    return float(np.sum(potential_matrix(D, spec)) / 2.0)


def asset_energy(D, spec: PotentialSpec, k: int) -> float:
    """U_k = (1/2) sum of u(r_kj) over j != k. The U_k sum to U."""
    D = as_distance_matrix(D)
    if D.n < 2:
        raise DegenerateInputError("at least two assets required")
    k = _check_index(k, D.n)
    row = D.values[k]
    others = np.arange(D.n) != k
    colliding = np.flatnonzero((row == 0.0) & others)
    if colliding.size:
        raise CollisionError(k, int(colliding[0]), ids=D.ids)
    return float(np.sum(potential_values(spec, row[others])) / 2.0)


def reference_energy(D, spec: PotentialSpec, k: int) -> float:
    """Comparand-only energy, scaled by 1/(N-2) to be commensurate with U_k.

    Computed as a direct sum over the submatrix that excludes asset k; the
    algebraic shortcut (U - 2 U_k)/(N - 2) is left to callers that already
    hold the full breakdown.
    """
    D = as_distance_matrix(D)
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    k = _check_index(k, n)
    keep = np.flatnonzero(np.arange(n) != k)
    sub = D.values[np.ix_(keep, keep)]
    iu, ju = np.triu_indices(n - 1, k=1)
    zeros = np.flatnonzero(sub[iu, ju] == 0.0)
    if zeros.size:
        a, b = int(iu[zeros[0]]), int(ju[zeros[0]])
        raise DoubletonError(int(keep[a]), int(keep[b]), ids=D.ids)
    u = potential_values(spec, sub)
    np.fill_diagonal(u, 0.0)
    return float(np.sum(u) / (2.0 * (n - 2)))


def energy_breakdown(D, spec: PotentialSpec, mean_U: float | None = None) -> EnergyBreakdown:
    """Vectorized U, all U_k, and all reference energies in one pass."""
    D = as_distance_matrix(D)
    n = D.n
    if n < 3:
        raise DegenerateInputError("at least two comparands required (N >= 3)")
    pairs = zero_pairs(D)
    if pairs:
        raise CollisionError(pairs[0][0], pairs[0][1], ids=D.ids)
    u = potential_matrix(D, spec)
    row_sums = np.sum(u, axis=1)
    total = float(np.sum(row_sums) / 2.0)
    per_asset = row_sums / 2.0
    reference = (total - row_sums) / (n - 2)
    return EnergyBreakdown(total, per_asset, reference, mean_U=mean_U)


def maxent_density(U: float, mean_U: float) -> float:
    """Density of the maximum-entropy energy distribution with mean mean_U."""
    _check_mean(mean_U)
    if U < 0:
        raise ValueError("energy must be nonnegative")
    return math.exp(-U / mean_U) / mean_U


def surprisal_total(D, spec: PotentialSpec, mean_U: float) -> float:
    """U / mean_U, the negative log-probability ratio against the empty limit."""
    _check_mean(mean_U)
    return total_energy(D, spec) / mean_U


def surprisal_asset(D, spec: PotentialSpec, k: int, mean_U: float) -> float:
    """U_k / mean_U; +inf when asset k collides with a comparand."""
    _check_mean(mean_U)
    try:
        return asset_energy(D, spec, k) / mean_U
    except CollisionError:
        return math.inf


def _check_mean(mean_U: float) -> None:
    if not mean_U > 0:
        raise ValueError("mean energy must be positive")


def _check_index(k: int, n: int) -> int:
    k = int(k)
    if not 0 <= k < n:
        raise IndexError(f"asset index {k} out of range for {n} assets")
    return k
