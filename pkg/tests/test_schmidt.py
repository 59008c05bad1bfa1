import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schmidtcorr import cases
from schmidtcorr.distributions import JointDistribution2D, LatticeAxis, embed_amplitude, pearson_correlation
from schmidtcorr.errors import InvalidInputError, InvalidSpectrumError
from schmidtcorr.schmidt import schmidt_correlation, schmidt_decompose, schmidt_number


def _lattice(mass):
    m = np.asarray(mass, dtype=float)
    return JointDistribution2D.from_mass(m, LatticeAxis(m.shape[0] - 1), LatticeAxis(m.shape[1] - 1))


def test_product_distribution_is_separable(rng):
    dist = _lattice(np.outer(rng.dirichlet(np.ones(7)), rng.dirichlet(np.ones(5))))
    spectrum, modes = schmidt_decompose(embed_amplitude(dist))
    assert spectrum.rank == 1
    assert spectrum.weights[0] == pytest.approx(1.0, abs=1e-12)
    assert spectrum.schmidt_number == pytest.approx(1.0, abs=1e-9)
    assert modes.count == 1


def test_diagonal_uniform_is_maximally_correlated():
    spectrum, _ = schmidt_decompose(embed_amplitude(_lattice(np.eye(4) / 4)))
    np.testing.assert_allclose(spectrum.weights, [0.25] * 4, atol=1e-14)
    assert spectrum.schmidt_number == pytest.approx(4.0, abs=1e-12)


def test_bivariate_gaussian_leading_weight():
    # geometric law: K = 1/sqrt(1 - 0.64) = 5/3, lambda0 = 2/(K+1) = 0.75
    spectrum, _ = schmidt_decompose(embed_amplitude(cases.bivariate_normal(0.8, cells=512)))
    assert abs(spectrum.weights[0] - 0.75) < 1e-3


def test_schmidt_number_examples():
    assert schmidt_number([1.0]) == 1.0
    assert schmidt_number([0.25] * 4) == 4.0
    lam = 0.5 * 0.5 ** np.arange(200)
    assert schmidt_number(lam / lam.sum()) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("bad", [[], [0.5, 0.4], [1.2, -0.2]])
def test_schmidt_number_rejects(bad):
    with pytest.raises(InvalidSpectrumError):
        schmidt_number(bad)


def test_schmidt_correlation_examples():
    assert schmidt_correlation(1.0) == 0.0
    assert schmidt_correlation(4.4318) == pytest.approx(0.9491, abs=5e-5)
    assert schmidt_correlation(3.5306) == pytest.approx(0.9198, abs=5e-5)
    with pytest.raises(InvalidInputError):
        schmidt_correlation(0.99)


def test_weight_floor_truncation_reported():
    mass = np.diag([0.5, 0.5 - 1e-13, 1e-13])
    spectrum, modes = schmidt_decompose(embed_amplitude(_lattice(mass)), weight_floor=1e-12)
    assert spectrum.rank == 2
    assert spectrum.tail_mass == pytest.approx(1e-13, rel=1e-6)
    assert modes.modes_a.shape == (3, 2)
    full, _ = schmidt_decompose(embed_amplitude(_lattice(mass)), weight_floor=0.0)
    assert full.rank == 3


def test_modes_orthonormal_and_reconstruct(rng):
    dist = _lattice(rng.dirichlet(np.ones(48)).reshape(6, 8))
    amp = embed_amplitude(dist)
    spectrum, modes = schmidt_decompose(amp, weight_floor=0.0)
    assert abs(spectrum.weights.sum() - 1) <= 1e-9
    r = modes.count
    np.testing.assert_allclose(modes.modes_a.T @ modes.modes_a, np.eye(r), atol=1e-8)
    np.testing.assert_allclose(modes.modes_b.T @ modes.modes_b, np.eye(r), atol=1e-8)
    rebuilt = (modes.modes_a * np.sqrt(spectrum.weights)) @ modes.modes_b.T
    assert np.linalg.norm(rebuilt - amp.entries) <= 1e-9


def test_pearson_zero_does_not_imply_separable():
    dist = cases.noisy_quadratic(128)
    spectrum, _ = schmidt_decompose(embed_amplitude(dist))
    assert abs(pearson_correlation(dist)) < 0.01
    assert spectrum.schmidt_number > 2


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), rows=st.integers(2, 7), cols=st.integers(2, 7))
def test_weights_invariant_under_local_orthogonal_maps(seed, rows, cols):
    rng = np.random.default_rng(seed)
    amp = np.sqrt(rng.dirichlet(np.ones(rows * cols)).reshape(rows, cols))
    qa, _ = np.linalg.qr(rng.normal(size=(rows, rows)))
    qb, _ = np.linalg.qr(rng.normal(size=(cols, cols)))
    w1, _ = schmidt_decompose(amp, weight_floor=0.0)
    w2, _ = schmidt_decompose(qa @ amp @ qb.T, weight_floor=0.0)
    np.testing.assert_allclose(w1.weights, w2.weights, atol=1e-10)
