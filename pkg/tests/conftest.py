import csv
from pathlib import Path

import numpy as np
import pytest

import originality as og

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def six_assets() -> og.DistanceMatrix:
    """Six-asset distance matrix with mean off-diagonal distance 1."""
    return og.read_matrix_csv(DATA / "six_assets.csv").matrix


@pytest.fixture(scope="session")
def titles() -> list[str]:
    lines = (DATA / "novel_titles.txt").read_text(encoding="utf-8").splitlines()
    return [line for line in lines if line.strip()]


@pytest.fixture(scope="session")
def reference_columns() -> dict[str, np.ndarray]:
    """Frozen reference score columns for the title corpus."""
    with open(DATA / "title_scores_reference.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return {
        key: np.array([float(row[key]) for row in rows])
        for key in ("word", "char", "edit")
    }


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)


def random_distance_matrix(rng: np.random.Generator, n: int) -> og.DistanceMatrix:
    """Symmetric, zero-diagonal, strictly positive off-diagonal entries."""
    values = rng.uniform(0.05, 3.0, size=(n, n))
    values = np.triu(values, k=1)
    return og.DistanceMatrix(values + values.T)


def random_point_matrix(rng: np.random.Generator, n: int, dim: int = 3) -> og.DistanceMatrix:
    """Euclidean distances of random points, a genuine metric."""
    return og.euclidean_matrix(rng.normal(size=(n, dim)))
