import math
from datetime import datetime

import numpy as np
import pytest
from scipy import stats

import originality as og
from conftest import random_distance_matrix


def test_dataset_from_matrix(six_assets):
    dataset = og.Dataset.from_matrix(six_assets)
    assert dataset.ids == ("a", "b", "c", "d", "e", "f")
    assert dataset.source_kind == "matrix"
    unnamed = og.Dataset.from_matrix(np.ones((3, 3)) - np.eye(3))
    assert unnamed.ids == ("0", "1", "2")


def test_dataset_from_texts_line_ids():
    dataset = og.Dataset.from_texts(("same", "same", "other"))
    assert dataset.ids == ("same", "same #2", "other")


def test_dataset_validation(six_assets):
    with pytest.raises(ValueError, match="duplicate"):
        og.Dataset((og.Asset("a"), og.Asset("a")), "texts")
    with pytest.raises(ValueError):
        og.Dataset((og.Asset("a", text="hi"),), "sounds")
    with pytest.raises(ValueError):
        og.Dataset((og.Asset("a"),), "vectors")
    with pytest.raises(ValueError):
        og.Dataset((og.Asset("a"), og.Asset("b")), "matrix", matrix=six_assets)


def test_with_day_precision():
    dataset = og.Dataset.from_texts(
        ("x", "y"), dates=(datetime(2020, 1, 2, 13, 45), None)
    )
    truncated = og.with_day_precision(dataset)
    assert truncated.dates == (datetime(2020, 1, 2), None)


def test_build_matrix_from_vectors():
    vectors = og.FeatureVectors(("p", "q"), [[0.0, 0.0], [3.0, 4.0]])
    matrix = og.build_matrix(og.Dataset.from_vectors(vectors))
    assert matrix.values[0, 1] == 5.0
    assert matrix.ids == ("p", "q")


def test_build_matrix_levenshtein_lowercases_by_default():
    dataset = og.Dataset.from_texts(("Cat", "cart", "dog"))
    matrix = og.build_matrix(dataset, og.ExtractionScheme(mode="levenshtein"))
    assert matrix.values[0, 1] == 1.0
    kept = og.build_matrix(
        dataset, og.ExtractionScheme(mode="levenshtein", lowercase=False)
    )
    assert kept.values[0, 1] == 2.0


def test_build_matrix_requires_scheme_for_texts():
    dataset = og.Dataset.from_texts(("a", "b"))
    with pytest.raises(ValueError, match="extraction scheme"):
        og.build_matrix(dataset)


def test_build_matrix_validates_structure():
    bad = og.DistanceMatrix([[0.0, 1.0], [2.0, 0.0]])
    dataset = og.Dataset.from_matrix(bad)
    with pytest.raises(og.DegenerateInputError, match="asymmetric"):
        og.build_matrix(dataset)
    assert og.build_matrix(dataset, validate=False) is dataset.matrix


def test_run_pipeline_matches_score_all(six_assets):
    result = og.run_pipeline(og.Dataset.from_matrix(six_assets))
    direct = og.score_all(six_assets)
    np.testing.assert_array_equal(result.report.scores, direct.scores)
    assert result.report.ids == six_assets.ids
    assert result.dropped == ()
    assert result.matrix.n == 6


def test_run_pipeline_from_texts(titles):
    dataset = og.Dataset.from_texts(titles)
    result = og.run_pipeline(dataset, extraction=og.ExtractionScheme())
    vectors = og.extract_frequency_vectors(titles, og.ExtractionScheme())
    direct = og.score_all(og.euclidean_matrix(vectors))
    np.testing.assert_array_equal(result.report.scores, direct.scores)


def test_normalize_leaves_coulomb_scores_alone(six_assets):
    dataset = og.Dataset.from_matrix(og.DistanceMatrix(six_assets.values * 7.3))
    plain = og.run_pipeline(dataset)
    scaled = og.run_pipeline(dataset, normalize=True)
    np.testing.assert_allclose(plain.report.scores, scaled.report.scores, rtol=1e-12)
    assert scaled.matrix.values[0, 1] != plain.matrix.values[0, 1]


def test_normalize_with_screened_potential_warns(six_assets):
    dataset = og.Dataset.from_matrix(six_assets)
    config = og.ScoreConfig(potential=og.PotentialSpec.screened(1.0))
    with pytest.warns(UserWarning, match="scale"):
        og.run_pipeline(dataset, config, normalize=True)


def test_dedupe_drops_zero_distance_assets():
    rows = [[0.0], [1.0], [1.0], [3.0]]
    vectors = og.FeatureVectors(("a", "b", "c", "d"), rows)
    dataset = og.Dataset.from_vectors(vectors)
    with pytest.raises(og.DoubletonError):
        og.run_pipeline(dataset)
    result = og.run_pipeline(dataset, dedupe=True)
    assert result.dropped == (("c", "b"),)
    report = result.report
    assert report.flags[2] == "duplicate_of:b"
    assert report.scores[2] == 0.0
    survivors = og.score_all(og.euclidean_matrix(np.asarray(rows)[[0, 1, 3]]))
    np.testing.assert_array_equal(report.scores[[0, 1, 3]], survivors.scores)
    assert report.ranks[2] == 4
    # the kept assets' flags stay clear and the matrix keeps its full size
    assert report.flags[0] is None and report.flags[1] is None
    assert result.matrix.n == 4


def test_dedupe_prefers_earliest_date():
    rows = [[0.0], [1.0], [1.0], [3.0]]
    vectors = og.FeatureVectors(("a", "b", "c", "d"), rows)
    dates = (
        datetime(2020, 1, 1),
        datetime(2022, 6, 1),
        datetime(2021, 6, 1),
        datetime(2023, 1, 1),
    )
    result = og.run_pipeline(og.Dataset.from_vectors(vectors, dates=dates), dedupe=True)
    assert result.dropped == (("b", "c"),)
    assert result.report.flags[1] == "duplicate_of:c"


def test_dedupe_needs_three_survivors():
    rows = [[0.0], [0.0], [1.0], [1.0]]
    dataset = og.Dataset.from_vectors(og.FeatureVectors(("a", "b", "c", "d"), rows))
    with pytest.raises(og.DegenerateInputError):
        og.run_pipeline(dataset, dedupe=True)


def test_time_ordered_pipeline_with_dedupe():
    rows = [[0.0], [1.0], [1.0], [3.0]]
    vectors = og.FeatureVectors(("a", "b", "c", "d"), rows)
    dates = (
        datetime(2020, 1, 1),
        datetime(2021, 1, 1),
        datetime(2022, 1, 1),
        datetime(2023, 1, 1),
    )
    dataset = og.Dataset.from_vectors(vectors, dates=dates)
    result = og.run_pipeline(
        dataset, og.ScoreConfig(time_ordered=True), dedupe=True
    )
    report = result.report
    assert report.flags == ("unscorable", "unscorable", "duplicate_of:b", None)
    assert report.comparands[3] == (0, 1)
    assert report.scores[3] == pytest.approx(2.4, rel=1e-12)
    assert report.scores[2] == 0.0
    np.testing.assert_array_equal(report.ranks, [3, 4, 2, 1])
    assert math.isnan(report.normalization_residual)


def test_time_ordered_pipeline_matches_direct(six_assets):
    dates = tuple(datetime(2020 + i, 1, 1) for i in range(6))
    assets = tuple(
        og.Asset(id=name, date=when) for name, when in zip(six_assets.ids, dates)
    )
    dataset = og.Dataset(assets, "matrix", matrix=six_assets)
    result = og.run_pipeline(dataset, og.ScoreConfig(time_ordered=True))
    direct = og.time_ordered_scores(six_assets, dates)
    np.testing.assert_array_equal(
        result.report.scores[2:], direct.scores[2:]
    )
    assert result.report.flags == direct.flags


def test_correlations_simple():
    a = [1.0, 2.0, 3.0, 4.0]
    assert og.correlations(a, a) == {"pearson": 1.0, "spearman": 1.0}
    flipped = og.correlations(a, [4.0, 3.0, 2.0, 1.0])
    assert flipped["pearson"] == pytest.approx(-1.0, rel=1e-15)
    assert flipped["spearman"] == pytest.approx(-1.0, rel=1e-15)


def test_correlations_match_scipy(rng):
    for trial in range(25):
        a = rng.normal(size=40)
        b = 0.4 * a + rng.normal(size=40)
        if trial % 2:
            # heavy ties exercise the average-rank handling
            a = np.round(a)
            b = np.round(b)
        result = og.correlations(a, b)
        assert result["pearson"] == pytest.approx(stats.pearsonr(a, b)[0], abs=1e-12)
        assert result["spearman"] == pytest.approx(stats.spearmanr(a, b)[0], abs=1e-12)


def test_correlations_validation():
    with pytest.raises(ValueError):
        og.correlations([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        og.correlations([1.0, 2.0], [2.0, 1.0])
    with pytest.raises(ValueError):
        og.correlations([1.0, 2.0, math.nan], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="constant"):
        og.correlations([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


EQUILATERAL_POINTS = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])


def test_heatmap_centroid_value():
    cy = math.sqrt(3.0) / 6.0
    grid = og.heatmap_grid(
        EQUILATERAL_POINTS, ((0.0, 1.0), (cy - 0.5, cy + 0.5)), (1, 1)
    )
    assert grid.values.shape == (1, 1)
    # the centroid probe sits 1/sqrt(3) from each vertex
    assert grid.values[0, 0] == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)


def test_heatmap_probe_on_fixed_point_scores_zero():
    grid = og.heatmap_grid(
        EQUILATERAL_POINTS, ((-0.5, 0.5), (-0.5, 0.5)), (1, 1)
    )
    assert grid.values[0, 0] == 0.0


def test_heatmap_matches_batch_scoring(rng):
    points = rng.normal(size=(5, 2))
    grid = og.heatmap_grid(points, ((-2.0, 2.0), (-1.5, 1.5)), (4, 3))
    for ix, x in enumerate(grid.x_centers):
        for iy, y in enumerate(grid.y_centers):
            D = og.euclidean_matrix(np.vstack([points, [x, y]]))
            expected = og.score_asset(D, og.COULOMB, 5)
            assert grid.values[ix, iy] == pytest.approx(expected, rel=1e-12)


def test_heatmap_grows_away_from_cluster():
    points = np.array([[0.0, 0.0], [1.0, 0.0]])
    near = og.heatmap_grid(points, ((0.0, 1.0), (0.5, 1.5)), (1, 1))
    far = og.heatmap_grid(points, ((0.0, 1.0), (9.5, 10.5)), (1, 1))
    assert far.values[0, 0] > near.values[0, 0]


def test_heatmap_grid_centers():
    grid = og.heatmap_grid(EQUILATERAL_POINTS, ((0.0, 1.0), (0.0, 2.0)), (2, 4))
    np.testing.assert_allclose(grid.x_centers, [0.25, 0.75], rtol=1e-15)
    np.testing.assert_allclose(grid.y_centers, [0.25, 0.75, 1.25, 1.75], rtol=1e-15)
    assert grid.values.shape == (2, 4)


def test_heatmap_validation():
    with pytest.raises(og.DoubletonError):
        og.heatmap_grid([[0.0, 0.0], [0.0, 0.0]], ((0.0, 1.0), (0.0, 1.0)), (2, 2))
    with pytest.raises(ValueError):
        og.heatmap_grid(EQUILATERAL_POINTS, ((1.0, 0.0), (0.0, 1.0)), (2, 2))
    with pytest.raises(ValueError):
        og.heatmap_grid(EQUILATERAL_POINTS, ((0.0, 1.0), (0.0, 1.0)), (0, 2))
    with pytest.raises(ValueError):
        og.heatmap_grid([[0.0], [1.0]], ((0.0, 1.0), (0.0, 1.0)), (2, 2))


def test_heatmap_threaded_matches_serial(rng, monkeypatch):
    points = rng.normal(size=(6, 2)) * 2.0
    bounds = ((-3.0, 3.0), (-3.0, 3.0))
    monkeypatch.delenv("ORIGINALITY_THREADS", raising=False)
    serial = og.heatmap_grid(points, bounds, (40, 40))
    monkeypatch.setenv("ORIGINALITY_THREADS", "4")
    threaded = og.heatmap_grid(points, bounds, (40, 40))
    np.testing.assert_array_equal(serial.values, threaded.values)


def test_max_workers_parsing(monkeypatch):
    monkeypatch.delenv("ORIGINALITY_THREADS", raising=False)
    assert og.max_workers() == 1
    monkeypatch.setenv("ORIGINALITY_THREADS", "8")
    assert og.max_workers() == 8
    monkeypatch.setenv("ORIGINALITY_THREADS", "0")
    assert og.max_workers() == 1
    monkeypatch.setenv("ORIGINALITY_THREADS", "lots")
    assert og.max_workers() == 1
