import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schmidtcorr import cases
from schmidtcorr.distributions import (
    GridAxis,
    JointDistribution2D,
    LatticeAxis,
    axis_from_json,
    build_grid_distribution,
    embed_amplitude,
    marginals,
    pearson_correlation,
)
from schmidtcorr.errors import DegenerateMarginalError, EmptySupportError, InvalidInputError

UNIT = GridAxis("u", 0.0, 1.0, 2)


def test_grid_axis_geometry():
    ax = GridAxis("x", -1.0, 1.0, 4)
    assert ax.width == 0.5
    np.testing.assert_allclose(ax.centers, [-0.75, -0.25, 0.25, 0.75])


@pytest.mark.parametrize("args", [("x", 1.0, 1.0, 4), ("x", 0.0, 1.0, 1), ("x", 0.0, np.inf, 4)])
def test_grid_axis_rejects(args):
    with pytest.raises(InvalidInputError):
        GridAxis(*args)


def test_axis_json_round_trip():
    ax = GridAxis("x", -2.0, 3.0, 7)
    assert axis_from_json(ax.to_json()) == ax
    lat = LatticeAxis(5, "k")
    assert axis_from_json(lat.to_json()) == lat
    with pytest.raises(InvalidInputError):
        axis_from_json({"label": "x", "lower": 0})


def test_uniform_grid_masses():
    dist = build_grid_distribution(lambda x, y: np.ones_like(x), UNIT, UNIT)
    np.testing.assert_allclose(dist.mass, 0.25)


def test_grid_distribution_sums_to_one():
    ax = GridAxis("x", -3, 3, 37)
    dist = build_grid_distribution(lambda x, y: np.exp(-x * x - 0.3 * y), ax, ax)
    assert abs(dist.mass.sum() - 1) <= 1e-12


def test_grid_distribution_all_zero():
    with pytest.raises(EmptySupportError):
        build_grid_distribution(lambda x, y: np.zeros_like(x), UNIT, UNIT)


def test_grid_distribution_is_bitwise_reproducible():
    a = cases.noisy_quadratic(64)
    b = cases.noisy_quadratic(64)
    assert np.array_equal(a.mass, b.mass)


def test_gaussian_marginal_means_by_quadrature():
    dist = cases.bivariate_normal(0.5, cells=256)
    pa, pb = marginals(dist)
    assert abs(pa @ dist.axis_a.centers) < 1e-3
    assert abs(pb @ dist.axis_b.centers) < 1e-3
    # midpoint quadrature of the normal density integrates to 1
    assert dist.total_mass == pytest.approx(1.0, abs=1e-6)


def test_embed_single_cell():
    one = LatticeAxis(0)
    amp = embed_amplitude(JointDistribution2D.from_mass([[1.0]], one, one))
    assert amp.entries.tolist() == [[1.0]]


def test_embed_uniform():
    amp = embed_amplitude(build_grid_distribution(lambda x, y: np.ones_like(x), UNIT, UNIT))
    np.testing.assert_allclose(amp.entries, 0.5)


def test_embed_noisy_quadratic_norm():
    amp = embed_amplitude(cases.noisy_quadratic(128))
    assert abs(np.linalg.norm(amp.entries) - 1) <= 1e-9
    assert abs(np.sum(amp.entries**2) - 1) <= 1e-9


def test_marginals_of_product(rng):
    p = rng.dirichlet(np.ones(4))
    q = rng.dirichlet(np.ones(6))
    dist = JointDistribution2D.from_mass(np.outer(p, q), LatticeAxis(3), LatticeAxis(5))
    ma, mb = marginals(dist)
    np.testing.assert_allclose(ma, p, atol=1e-15)
    np.testing.assert_allclose(mb, q, atol=1e-15)
    assert abs(ma.sum() - 1) <= 1e-9 and abs(mb.sum() - 1) <= 1e-9


def test_from_mass_renormalizes_small_deviation():
    dist = JointDistribution2D.from_mass(np.full((2, 2), 0.25 * (1 + 5e-7)), UNIT, UNIT)
    assert dist.mass.sum() == pytest.approx(1.0, abs=1e-15)
    assert dist.total_mass == pytest.approx(1 + 5e-7)


@pytest.mark.parametrize("mass", [np.full((2, 2), 0.3), [[0.5, 0.5], [0.5, -0.5]], np.ones((3, 2)) / 6])
def test_from_mass_rejects(mass):
    with pytest.raises(InvalidInputError):
        JointDistribution2D.from_mass(mass, UNIT, UNIT)


def test_mass_is_read_only():
    dist = cases.noisy_quadratic(16)
    with pytest.raises(ValueError):
        dist.mass[0, 0] = 1.0


def test_pearson_product_is_zero(rng):
    p = rng.dirichlet(np.ones(5))
    q = rng.dirichlet(np.ones(5))
    dist = JointDistribution2D.from_mass(np.outer(p, q), LatticeAxis(4), LatticeAxis(4))
    assert abs(pearson_correlation(dist)) <= 1e-12


def test_pearson_diagonal_is_one():
    dist = JointDistribution2D.from_mass(np.eye(5) / 5, LatticeAxis(4), LatticeAxis(4))
    assert pearson_correlation(dist) == pytest.approx(1.0, abs=1e-9)


def test_pearson_noisy_quadratic_vanishes():
    assert abs(pearson_correlation(cases.noisy_quadratic(256))) < 0.01


def test_pearson_zero_variance():
    mass = np.zeros((3, 3))
    mass[1, :] = 1 / 3
    dist = JointDistribution2D.from_mass(mass, LatticeAxis(2), LatticeAxis(2))
    with pytest.raises(DegenerateMarginalError):
        pearson_correlation(dist)


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    shift_a=st.floats(-10, 10),
    shift_b=st.floats(-10, 10),
    scale_a=st.floats(0.1, 10),
    scale_b=st.floats(0.1, 10),
)
def test_pearson_affine_invariance(seed, shift_a, shift_b, scale_a, scale_b):
    rng = np.random.default_rng(seed)
    mass = rng.dirichlet(np.ones(30)).reshape(5, 6)
    base = JointDistribution2D.from_mass(mass, GridAxis("a", 0, 1, 5), GridAxis("b", 0, 1, 6))
    moved = JointDistribution2D.from_mass(
        mass,
        GridAxis("a", shift_a, shift_a + scale_a, 5),
        GridAxis("b", shift_b, shift_b + scale_b, 6),
    )
    assert abs(pearson_correlation(base) - pearson_correlation(moved)) <= 1e-10
