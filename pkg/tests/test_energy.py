import math

import numpy as np
import pytest
from scipy import integrate

import originality as og
from conftest import random_distance_matrix

# Full-precision six-asset breakdown, frozen from a brute-force pair loop.
SIX_TOTAL = 16.082223332223332
SIX_PER_ASSET = [
    3.255952380952381,
    3.097222222222222,
    2.8034465534465536,
    2.6447163947163945,
    2.2937062937062938,
    1.9871794871794872,
]
SIX_REFERENCE = [
    2.3925796425796424,
    2.471944721944722,
    2.6188325563325563,
    2.6981976356976354,
    2.873702686202686,
    3.0269660894660895,
]

EQUILATERAL = og.DistanceMatrix(np.ones((3, 3)) - np.eye(3))
COLLINEAR = og.DistanceMatrix([[0.0, 0.5, 1.0], [0.5, 0.0, 0.5], [1.0, 0.5, 0.0]])


def test_pair_total():
    D = [[0.0, 0.5], [0.5, 0.0]]
    assert og.total_energy(D, og.COULOMB) == 2.0


def test_equilateral_energies():
    assert og.total_energy(EQUILATERAL, og.COULOMB) == 3.0
    for k in range(3):
        assert og.asset_energy(EQUILATERAL, og.COULOMB, k) == 1.0
        assert og.reference_energy(EQUILATERAL, og.COULOMB, k) == 1.0


def test_collinear_energies():
    assert og.total_energy(COLLINEAR, og.COULOMB) == 5.0
    assert [og.asset_energy(COLLINEAR, og.COULOMB, k) for k in range(3)] == [1.5, 2.0, 1.5]
    assert [og.reference_energy(COLLINEAR, og.COULOMB, k) for k in range(3)] == [2.0, 1.0, 2.0]


def test_six_asset_breakdown(six_assets):
    down = og.energy_breakdown(six_assets, og.COULOMB)
    assert down.total_U == pytest.approx(SIX_TOTAL, rel=1e-15)
    assert down.total_U == pytest.approx(16.082224, abs=1e-6)
    np.testing.assert_allclose(down.per_asset_U, SIX_PER_ASSET, rtol=1e-13)
    np.testing.assert_allclose(down.reference_U, SIX_REFERENCE, rtol=1e-13)


def test_breakdown_matches_scalar_routes(six_assets):
    """The vectorized breakdown and the one-asset functions must agree."""
    down = og.energy_breakdown(six_assets, og.PotentialSpec.screened(0.7))
    for k in range(six_assets.n):
        own = og.asset_energy(six_assets, og.PotentialSpec.screened(0.7), k)
        ref = og.reference_energy(six_assets, og.PotentialSpec.screened(0.7), k)
        assert down.per_asset_U[k] == pytest.approx(own, rel=1e-12)
        assert down.reference_U[k] == pytest.approx(ref, rel=1e-12)


def test_per_asset_sums_to_total(rng):
    for n in (3, 7, 40):
        D = random_distance_matrix(rng, n)
        down = og.energy_breakdown(D, og.COULOMB)
        assert np.sum(down.per_asset_U) == pytest.approx(down.total_U, rel=1e-12)


def test_reference_identity(rng):
    """Direct comparand sums must match the (U - 2 U_k)/(N - 2) shortcut."""
    for n in (3, 5, 23):
        D = random_distance_matrix(rng, n)
        for spec in (og.COULOMB, og.PotentialSpec.power(3), og.PotentialSpec.screened(1.1)):
            down = og.energy_breakdown(D, spec)
            for k in range(n):
                direct = og.reference_energy(D, spec, k)
                shortcut = (down.total_U - 2.0 * down.per_asset_U[k]) / (n - 2)
                assert direct == pytest.approx(shortcut, rel=1e-12)


@pytest.mark.parametrize(
    "spec,exponent",
    [(og.COULOMB, 1), (og.PotentialSpec.power(2), 2), (og.PotentialSpec.power(5), 5)],
)
def test_scale_covariance(rng, spec, exponent):
    """Rescaling all distances by c divides every energy by c**n."""
    D = random_distance_matrix(rng, 9)
    c = 3.7
    scaled = og.DistanceMatrix(D.values * c)
    base = og.energy_breakdown(D, spec)
    after = og.energy_breakdown(scaled, spec)
    assert after.total_U == pytest.approx(base.total_U / c**exponent, rel=1e-12)
    np.testing.assert_allclose(after.per_asset_U, base.per_asset_U / c**exponent, rtol=1e-12)


def test_permutation_equivariance(rng):
    D = random_distance_matrix(rng, 12)
    perm = rng.permutation(12)
    P = og.DistanceMatrix(D.values[np.ix_(perm, perm)])
    base = og.energy_breakdown(D, og.COULOMB)
    after = og.energy_breakdown(P, og.COULOMB)
    assert after.total_U == pytest.approx(base.total_U, rel=1e-12)
    np.testing.assert_allclose(after.per_asset_U, base.per_asset_U[perm], rtol=1e-12)
    np.testing.assert_allclose(after.reference_U, base.reference_U[perm], rtol=1e-12)


def test_collision_errors():
    D = og.DistanceMatrix([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]], ids=("a", "b", "c"))
    with pytest.raises(og.CollisionError, match="'a' coincides with comparand 'b'"):
        og.total_energy(D, og.COULOMB)
    with pytest.raises(og.CollisionError):
        og.asset_energy(D, og.COULOMB, 0)
    # from c's point of view the colliding pair is a comparand doubleton
    with pytest.raises(og.DoubletonError, match="'a' and 'b'"):
        og.reference_energy(D, og.COULOMB, 2)
    assert og.zero_pairs(D) == [(0, 1)]


def test_degenerate_sizes():
    with pytest.raises(og.DegenerateInputError):
        og.total_energy([[0.0]], og.COULOMB)
    with pytest.raises(og.DegenerateInputError, match="at least two comparands"):
        og.reference_energy([[0.0, 1.0], [1.0, 0.0]], og.COULOMB, 0)
    with pytest.raises(og.DegenerateInputError):
        og.energy_breakdown([[0.0, 1.0], [1.0, 0.0]], og.COULOMB)
    with pytest.raises(IndexError):
        og.asset_energy(EQUILATERAL, og.COULOMB, 3)


def test_matrix_validation_and_immutability():
    with pytest.raises(ValueError, match="square"):
        og.DistanceMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="ids"):
        og.DistanceMatrix(np.zeros((2, 2)), ids=("a",))
    D = og.DistanceMatrix(np.ones((2, 2)) - np.eye(2), ids=[1, 2])
    assert D.ids == ("1", "2")
    assert D.label(0) == "1"
    with pytest.raises(ValueError):
        D.values[0, 1] = 5.0
    assert og.as_distance_matrix(D) is D


def test_maxent_density_values():
    assert og.maxent_density(0.0, 2.0) == 0.5
    assert og.maxent_density(2.0, 2.0) == pytest.approx(math.exp(-1.0) / 2.0, rel=1e-15)
    with pytest.raises(ValueError):
        og.maxent_density(-1.0, 2.0)
    with pytest.raises(ValueError):
        og.maxent_density(1.0, 0.0)


@pytest.mark.parametrize("mean", [0.25, 1.0, 16.082223332223332])
def test_maxent_density_normalizes(mean):
    value, _ = integrate.quad(og.maxent_density, 0.0, math.inf, args=(mean,))
    assert value == pytest.approx(1.0, abs=1e-6)


def test_surprisal(six_assets):
    mean = 4.0
    total = og.surprisal_total(six_assets, og.COULOMB, mean)
    assert total == pytest.approx(SIX_TOTAL / mean, rel=1e-12)
    parts = [og.surprisal_asset(six_assets, og.COULOMB, k, mean) for k in range(6)]
    assert sum(parts) == pytest.approx(total, abs=1e-9)


def test_surprisal_of_remote_assets_vanishes():
    D = og.DistanceMatrix(1e12 * (np.ones((3, 3)) - np.eye(3)))
    assert og.surprisal_total(D, og.COULOMB, 1.0) < 1e-9


def test_surprisal_collision_is_infinite():
    D = [[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    assert og.surprisal_asset(D, og.COULOMB, 0, 1.0) == math.inf
    with pytest.raises(ValueError):
        og.surprisal_asset(D, og.COULOMB, 2, -1.0)
