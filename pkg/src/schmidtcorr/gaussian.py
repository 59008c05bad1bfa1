"""Analytic Schmidt decomposition of Gaussian states.

The square root of a normal density factorizes over canonical variable
pairs.  Each canonical correlation ``rho_j`` contributes a partial Schmidt
number ``K_j = 1/sqrt(1 - rho_j**2)`` and a geometric spectrum
``lambda_n = lambda0_j * q_j**n`` with ``lambda0_j = 2/(K_j + 1)`` and
``q_j = (K_j - 1)/(K_j + 1)``.  Joint modes are products of Hermite modes of
the canonical coordinates, and their weights are products of the per-pair
weights.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .distributions import AmplitudeMatrix, GridAxis
from .errors import (
    DegeneratePairError,
    DomainError,
    InconsistentRhoError,
    InsufficientSupportError,
    InvalidInputError,
    SingularCorrelationError,
)
from .schmidt import schmidt_correlation

__all__ = [
    "GaussianSpec",
    "CanonicalPair",
    "GaussianSchmidtDecomposition",
    "bivariate_schmidt_number",
    "geometric_weights",
    "hermite_normalization",
    "hermite_mode",
    "canonical_correlations",
    "canonical_weights",
    "decompose_gaussian",
    "multiple_correlation_det",
    "enumerate_mode_weights",
    "multivariate_schmidt_modes",
    "gaussian_amplitude_matrix",
]

RHO_ZERO_TOL = 1e-10
RHO_ONE_TOL = 1e-12
PAIR_SYMMETRY_TOL = 1e-9
NULL_TOL = 1e-8
SUPPORT_SIGMAS = 6.0


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GaussianSpec:
    """Covariance matrix with a bipartition of its variables.

    The first ``partition_p`` variables form subsystem A and the rest form
    subsystem B.  Internally the smaller subsystem is always treated as the
    first one; ``swapped`` records whether that required exchanging A and B.
    Decomposition quantities depend only on the covariance; ``means`` only
    shift sampled modes.
    """

    covariance: np.ndarray
    partition_p: int
    means: np.ndarray = None

    def __post_init__(self):
        cov = np.array(self.covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise InvalidInputError(f"covariance must be square, got shape {cov.shape}")
        n = cov.shape[0]
        p = self.partition_p
        if int(p) != p or not 1 <= p <= n - 1:
            raise InvalidInputError(f"partition p must satisfy 1 <= p <= {n - 1}, got {p!r}")
        # sym_eig checks symmetry; inv_sqrt_sym checks positive definiteness
        linalg.inv_sqrt_sym(cov)
        means = np.zeros(n) if self.means is None else np.array(self.means, dtype=float)
        if means.shape != (n,) or not np.all(np.isfinite(means)):
            raise InvalidInputError(f"means must be a finite vector of length {n}")
        object.__setattr__(self, "covariance", _frozen(cov))
        object.__setattr__(self, "partition_p", int(p))
        object.__setattr__(self, "means", _frozen(means))

    @classmethod
    def from_correlation(cls, corr, partition_p, sigmas=None, means=None):
        corr = np.asarray(corr, dtype=float)
        s = np.ones(len(corr)) if sigmas is None else np.asarray(sigmas, dtype=float)
        return cls(corr * np.outer(s, s), partition_p, means)

    @property
    def dimension(self):
        return self.covariance.shape[0]

    @property
    def partition_q(self):
        return self.dimension - self.partition_p

    @property
    def swapped(self):
        return self.partition_p > self.partition_q

    @property
    def p(self):
        """Size of the internal (smaller) first subsystem."""
        return min(self.partition_p, self.partition_q)

    @property
    def q(self):
        return max(self.partition_p, self.partition_q)

    @property
    def index_a(self):
        """Original variable indices of the internal first subsystem."""
        n, p0 = self.dimension, self.partition_p
        return np.arange(p0, n) if self.swapped else np.arange(p0)

    @property
    def index_b(self):
        n, p0 = self.dimension, self.partition_p
        return np.arange(p0) if self.swapped else np.arange(p0, n)

    def blocks(self):
        """``(S11, S12, S22)`` in internal orientation."""
        ia, ib = self.index_a, self.index_b
        c = self.covariance
        return c[np.ix_(ia, ia)], c[np.ix_(ia, ib)], c[np.ix_(ib, ib)]


@dataclass(frozen=True)
class CanonicalPair:
    """One canonical correlation with weight vectors and spectrum parameters.

    ``alpha`` acts on the internal first subsystem (``spec.index_a``) and
    ``beta`` on the second; both give unit-variance canonical variables.
    """

    rho: float
    alpha: np.ndarray
    beta: np.ndarray
    partial_K: float
    lambda0: float
    ratio_q: float

    def weight(self, n):
        return self.lambda0 * self.ratio_q**n


@dataclass(frozen=True)
class GaussianSchmidtDecomposition:
    pairs: tuple
    total_K: float
    correlation_sq: float
    spec: GaussianSpec = field(repr=False, compare=False)

    @property
    def r(self):
        return len(self.pairs)


def bivariate_schmidt_number(rho):
    """Schmidt number ``1/sqrt(1 - rho**2)`` of a bivariate normal state."""
    rho = float(rho)
    if not abs(rho) < 1.0:
        raise SingularCorrelationError(f"|rho| must be < 1, got {rho!r}")
    return 1.0 / math.sqrt(1.0 - rho * rho)


def geometric_weights(K, count):
    """First ``count`` weights ``lambda0 * q**k`` of the geometric Schmidt spectrum."""
    if not np.isfinite(K) or K < 1.0:
        raise InvalidInputError(f"Schmidt number must be >= 1, got {K!r}")
    if int(count) != count or count < 1:
        raise InvalidInputError(f"count must be a positive integer, got {count!r}")
    lam0 = 2.0 / (K + 1.0)
    q = (K - 1.0) / (K + 1.0)
    return lam0 * q ** np.arange(int(count), dtype=float)


def hermite_normalization(k, sigma, K):
    """Continuous normalization constant of the order-``k`` Hermite mode."""
    return (K / 2.0) ** 0.25 / math.sqrt(sigma) / math.pi**0.25 / math.sqrt(2.0**k * math.factorial(k))


def _hermite_profile(k, u):
    """``H_k(u) * exp(-u**2/2)``, the unnormalized Hermite function."""
    return linalg.hermite_poly(k, u) * np.exp(-0.5 * u * u)


def hermite_mode(k, mean, sigma, K, sample_axis):
    """Sample the order-``k`` Gaussian Schmidt mode at the cell centers of an axis.

    The mode is ``C_k H_k(u) exp(-u**2/2)`` with ``u = (x - mean)/sigma *
    sqrt(K/2)``.  Samples are in continuous units and rescaled so that
    ``sum(psi**2) * dx == 1``.

    Raises
    ------
    InsufficientSupportError
        If the axis does not cover ``mean +- 6 sigma / sqrt(K)``.
    """
    if not sigma > 0:
        raise InvalidInputError(f"sigma must be positive, got {sigma!r}")
    if not np.isfinite(K) or K < 1.0:
        raise InvalidInputError(f"Schmidt number must be >= 1, got {K!r}")
    reach = SUPPORT_SIGMAS * sigma / math.sqrt(K) * (1 - 1e-9)
    if sample_axis.lower > mean - reach or sample_axis.upper < mean + reach:
        raise InsufficientSupportError(
            f"axis [{sample_axis.lower}, {sample_axis.upper}] does not cover "
            f"mean +- {reach:.6g}"
        )
    u = (sample_axis.centers - mean) / sigma * math.sqrt(K / 2.0)
    psi = hermite_normalization(k, sigma, K) * _hermite_profile(k, u)
    return psi / math.sqrt(np.sum(psi**2) * sample_axis.width)


def _a1_spectrum(spec):
    s11, s12, s22 = spec.blocks()
    p, q = spec.p, spec.q
    A = np.zeros((p + q, p + q))
    A[:p, p:] = s12
    A[p:, :p] = s12.T
    B = np.zeros((p + q, p + q))
    B[:p, :p] = s11
    B[p:, p:] = s22
    b_half = linalg.inv_sqrt_sym(B)
    a1 = b_half @ A @ b_half
    return linalg.sym_eig(0.5 * (a1 + a1.T)).eigenvalues


def canonical_correlations(spec):
    """Strictly positive canonical correlations, descending.

    They are the positive eigenvalues of ``B^{-1/2} A B^{-1/2}`` with
    ``A = [[0, S12], [S21, 0]]`` and ``B = diag(S11, S22)``.  The full
    spectrum is checked to be symmetric about zero with ``q - p`` structural
    zeros.
    """
    w = _a1_spectrum(spec)
    p, q = spec.p, spec.q
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w + w[::-1])) > PAIR_SYMMETRY_TOL * scale:
        raise DomainError("canonical spectrum is not symmetric about zero")
    if q > p and np.max(np.abs(w[p:q])) > PAIR_SYMMETRY_TOL * scale:
        raise DomainError(f"expected {q - p} structural zero eigenvalues")
    rho = w[:p]
    if rho[0] >= 1.0 - RHO_ONE_TOL:
        raise SingularCorrelationError(
            f"canonical correlation {rho[0]:.15g} is 1 to working precision; "
            "the state is not normalizable"
        )
    return _frozen(rho[rho > RHO_ZERO_TOL])


def _eq20_matrix(spec, rho_j):
    s11, s12, s22 = spec.blocks()
    p = spec.p
    n = spec.dimension
    m = np.empty((n, n))
    m[:p, :p] = -rho_j * s11
    m[:p, p:] = s12
    m[p:, :p] = s12.T
    m[p:, p:] = -rho_j * s22
    return m


def canonical_weights(spec, rho_j, tol=NULL_TOL):
    """Canonical weight vectors ``(alpha, beta)`` for one canonical correlation.

    ``(alpha, beta)`` spans the null space of
    ``[[-rho S11, S12], [S21, -rho S22]]``; each half is scaled to unit
    variance.  ``alpha`` has a positive first nonzero component and ``beta``
    is oriented so that ``alpha @ S12 @ beta == +rho``.
    """
    m = _eq20_matrix(spec, float(rho_j))
    s = np.linalg.svd(m, compute_uv=False)
    multiplicity = int(np.sum(s <= tol * s[0]))
    if multiplicity == 0:
        raise InconsistentRhoError(
            f"rho = {rho_j!r} is not a canonical correlation of this covariance "
            f"(smallest singular value {s[-1]:.3e})"
        )
    if multiplicity > 1:
        raise DegeneratePairError(
            f"canonical correlation {rho_j:.12g} is repeated (multiplicity {multiplicity})",
            multiplicity,
        )
    v = linalg.null_vector(m, tol)
    s11, s12, s22 = spec.blocks()
    p = spec.p
    alpha = np.array(v[:p])
    beta = np.array(v[p:])
    alpha /= math.sqrt(alpha @ s11 @ alpha)
    beta /= math.sqrt(beta @ s22 @ beta)
    big = np.abs(alpha) > 1e-12 * np.max(np.abs(alpha))
    if alpha[np.argmax(big)] < 0:
        alpha = -alpha
    if alpha @ s12 @ beta < 0:
        beta = -beta
    return _frozen(alpha), _frozen(beta)


def decompose_gaussian(spec):
    """Full analytic Schmidt decomposition of a Gaussian state."""
    rhos = canonical_correlations(spec)
    for i in range(len(rhos) - 1):
        if rhos[i] - rhos[i + 1] <= NULL_TOL * max(rhos[i], 1.0):
            count = int(np.sum(np.abs(rhos - rhos[i]) <= NULL_TOL))
            raise DegeneratePairError(
                f"canonical correlation {rhos[i]:.12g} is repeated (multiplicity {count})",
                count,
            )
    pairs = []
    for rho in rhos:
        alpha, beta = canonical_weights(spec, rho)
        K = bivariate_schmidt_number(rho)
        pairs.append(
            CanonicalPair(
                rho=float(rho),
                alpha=alpha,
                beta=beta,
                partial_K=K,
                lambda0=2.0 / (K + 1.0),
                ratio_q=(K - 1.0) / (K + 1.0),
            )
        )
    total_K = float(np.prod([pair.partial_K for pair in pairs])) if pairs else 1.0
    return GaussianSchmidtDecomposition(
        pairs=tuple(pairs),
        total_K=total_K,
        correlation_sq=schmidt_correlation(total_K),
        spec=spec,
    )


def multiple_correlation_det(spec):
    """Multiple correlation ``1 - det(S) / (det(S11) det(S22))``."""
    s11, _, s22 = spec.blocks()
    sign, logdet = np.linalg.slogdet(spec.covariance)
    sign11, logdet11 = np.linalg.slogdet(s11)
    sign22, logdet22 = np.linalg.slogdet(s22)
    if min(sign, sign11, sign22) <= 0:
        raise DomainError("covariance blocks must have positive determinants")
    return float(-np.expm1(logdet - logdet11 - logdet22))


def enumerate_mode_weights(decomp, top_n):
    """The ``top_n`` largest product-mode weights with their multi-indices.

    Best-first search over the lattice of multi-indices: the weight of a
    multi-index never increases when one of its entries is incremented, so
    popping the heaviest frontier element yields weights in order.  Equal
    weights are ordered lexicographically by multi-index.
    """
    if int(top_n) != top_n or top_n < 1:
        raise InvalidInputError(f"top_n must be a positive integer, got {top_n!r}")
    pairs = decomp.pairs
    r = len(pairs)
    if r == 0:
        return [((), 1.0)]
    base = math.prod(pair.lambda0 for pair in pairs)

    def weight(idx):
        w = base
        for pair, n in zip(pairs, idx):
            w *= pair.ratio_q**n
        return w

    start = (0,) * r
    heap = [(-weight(start), start)]
    seen = {start}
    out = []
    while heap and len(out) < top_n:
        neg_w, idx = heapq.heappop(heap)
        out.append((idx, -neg_w))
        for j in range(r):
            nxt = idx[:j] + (idx[j] + 1,) + idx[j + 1 :]
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (-weight(nxt), nxt))
    return out


def _check_axes(spec, sample_axes):
    axes = list(sample_axes)
    if len(axes) != spec.dimension:
        raise InvalidInputError(f"need {spec.dimension} sample axes, got {len(axes)}")
    sig = np.sqrt(np.diag(spec.covariance))
    for i, ax in enumerate(axes):
        reach = SUPPORT_SIGMAS * sig[i] * (1 - 1e-9)
        if ax.lower > spec.means[i] - reach or ax.upper < spec.means[i] + reach:
            raise InsufficientSupportError(
                f"axis {i} [{ax.lower}, {ax.upper}] does not cover mean +- 6 sigma"
            )
    return axes


def _subsystem_coords(spec, axes, index):
    centers = [axes[i].centers - spec.means[i] for i in index]
    mesh = np.meshgrid(*centers, indexing="ij")
    return np.stack(mesh, axis=-1)


def _product_mode(x, block_cov, vectors, Ks, orders):
    """Product of canonical Hermite modes times the uncorrelated Gaussian factor."""
    prec = np.linalg.inv(block_cov)
    exponent = np.einsum("...i,ij,...j->...", x, prec, x)
    mode = np.ones(x.shape[:-1])
    for vec, K, n in zip(vectors, Ks, orders):
        z = x @ vec
        exponent = exponent + (K - 1.0) * z * z
        mode = mode * linalg.hermite_poly(n, math.sqrt(K / 2.0) * z)
    mode = mode * np.exp(-0.25 * exponent)
    mode /= np.linalg.norm(mode)
    flat = mode.ravel()
    if flat[np.argmax(np.abs(flat))] < 0:
        mode = -mode
    return mode


def multivariate_schmidt_modes(spec, index, sample_axes, decomposition=None):
    """Sample a product Schmidt mode on the variables' grids.

    Parameters
    ----------
    spec : GaussianSpec
    index : sequence of int
        Multi-index ``(n_1, ..., n_r)``, one order per canonical pair.
    sample_axes : sequence of GridAxis
        One axis per original variable; each must cover ``mean +- 6 sigma``.
    decomposition : GaussianSchmidtDecomposition, optional
        Reused if given.

    Returns
    -------
    mode_a, mode_b : ndarray
        Arrays over the grids of the first ``partition_p`` variables and of
        the remaining ones, each with unit discrete (Euclidean) norm.  The
        numeric renormalization absorbs the Jacobian of the change to
        canonical coordinates.
    """
    decomp = decompose_gaussian(spec) if decomposition is None else decomposition
    index = tuple(int(n) for n in index)
    if len(index) != decomp.r or any(n < 0 for n in index):
        raise InvalidInputError(
            f"mode index must have {decomp.r} nonnegative entries, got {index!r}"
        )
    axes = _check_axes(spec, sample_axes)
    s11, _, s22 = spec.blocks()
    Ks = [pair.partial_K for pair in decomp.pairs]
    mode_a = _product_mode(
        _subsystem_coords(spec, axes, spec.index_a), s11,
        [pair.alpha for pair in decomp.pairs], Ks, index,
    )
    mode_b = _product_mode(
        _subsystem_coords(spec, axes, spec.index_b), s22,
        [pair.beta for pair in decomp.pairs], Ks, index,
    )
    if spec.swapped:
        mode_a, mode_b = mode_b, mode_a
    return mode_a, mode_b


def default_axes(spec, cells, half_range=SUPPORT_SIGMAS):
    """``GridAxis`` per variable spanning ``mean +- half_range * sigma``."""
    sig = np.sqrt(np.diag(spec.covariance))
    return [
        GridAxis.symmetric(f"x{i + 1}", float(spec.means[i]), half_range * float(sig[i]), cells)
        for i in range(spec.dimension)
    ]


def gaussian_amplitude_matrix(spec, sample_axes):
    """Gridded Gaussian amplitudes, flattened to (subsystem A cells) x (subsystem B cells).

    Rows enumerate the grid of the first ``partition_p`` variables in C
    order, columns the grid of the remaining ones.
    """
    axes = list(sample_axes)
    if len(axes) != spec.dimension:
        raise InvalidInputError(f"need {spec.dimension} sample axes, got {len(axes)}")
    prec = np.linalg.inv(spec.covariance)
    centers = [ax.centers - spec.means[i] for i, ax in enumerate(axes)]
    x = np.stack(np.meshgrid(*centers, indexing="ij"), axis=-1)
    log_density = -0.5 * np.einsum("...i,ij,...j->...", x, prec, x)
    mass = np.exp(log_density - log_density.max())
    mass /= mass.sum()
    p0 = spec.partition_p
    rows = math.prod(ax.cells for ax in axes[:p0])
    amp = np.sqrt(mass).reshape(rows, -1)
    return AmplitudeMatrix(_frozen(amp), tuple(axes[:p0]), tuple(axes[p0:]))
