"""Photon-number statistics through a beam splitter.

The input beam follows the compound Poisson (negative binomial) law with
mean ``mu`` and clusterization parameter ``a``.  Each photon is transmitted
independently with probability ``p``, so a total of ``n`` photons splits
binomially into ``(k1, k2)``.  Correlation between the two output channels
is measured both by the Pearson coefficient and by the Schmidt number of the
square-root-embedded joint distribution.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import JointDistribution2D, LatticeAxis, embed_amplitude, pearson_correlation
from .errors import EmptySupportError, InvalidInputError, SchmidtError
from .schmidt import schmidt_decompose

__all__ = [
    "CompoundPoissonParams",
    "BeamSplitterParams",
    "SweepSpec",
    "SweepRow",
    "compound_poisson_pmf",
    "choose_truncation",
    "beam_split",
    "pearson_closed_form",
    "correlation_point",
    "correlation_sweep",
    "SWEEP_COLUMNS",
]

log = logging.getLogger(__name__)

DEFAULT_TAIL = 1e-10
SWEEP_COLUMNS = ("a", "mu", "p", "pearson_cf", "pearson_num", "schmidt_rho_sq", "schmidt_K")


def _positive(name, value):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise InvalidInputError(f"{name} must be finite and positive, got {value!r}")
    return value


@dataclass(frozen=True)
class CompoundPoissonParams:
    mu: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "mu", _positive("mu", self.mu))
        object.__setattr__(self, "a", _positive("a", self.a))

    @property
    def g2(self):
        """Second-order correlation function ``1 + 1/a``."""
        return 1.0 + 1.0 / self.a

    @property
    def variance(self):
        return self.mu * (1.0 + self.mu / self.a)


@dataclass(frozen=True)
class BeamSplitterParams:
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 < p < 1.0:
            raise InvalidInputError(f"transmission probability must lie in (0, 1), got {p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class SweepSpec:
    a_values: tuple
    mu_values: tuple
    p: float
    truncation_tail: float = DEFAULT_TAIL

    def __post_init__(self):
        a = tuple(_positive("a", v) for v in self.a_values)
        mu = tuple(_positive("mu", v) for v in self.mu_values)
        if not a or not mu:
            raise InvalidInputError("sweep needs at least one a value and one mu value")
        BeamSplitterParams(self.p)
        if not 0.0 < self.truncation_tail < 1.0:
            raise InvalidInputError(f"truncation tail must lie in (0, 1), got {self.truncation_tail!r}")
        object.__setattr__(self, "a_values", a)
        object.__setattr__(self, "mu_values", mu)
        object.__setattr__(self, "p", float(self.p))

    def points(self):
        """``(a, mu)`` pairs, ``mu`` varying slowest."""
        return [(a, mu) for mu in self.mu_values for a in self.a_values]


def _log_pmf(params, k_max):
    # log of a(a+1)...(a+k-1)(mu/a)^k = sum_{i<k} [log mu + log1p(i/a)]
    i = np.arange(k_max, dtype=float)
    steps = math.log(params.mu) + np.log1p(i / params.a)
    log_rising = np.concatenate(([0.0], np.cumsum(steps)))
    k = np.arange(k_max + 1, dtype=float)
    lgam = np.array([math.lgamma(v + 1.0) for v in k])
    return log_rising - lgam - (params.a + k) * math.log1p(params.mu / params.a)


def compound_poisson_pmf(params, k_max):
    """``P(k)`` for ``k = 0..k_max``, evaluated in log space."""
    if int(k_max) != k_max or k_max < 0:
        raise InvalidInputError(f"k_max must be a nonnegative integer, got {k_max!r}")
    return np.exp(_log_pmf(params, int(k_max)))


def choose_truncation(params, tail=DEFAULT_TAIL):
    """Smallest ``k_max`` whose cumulative probability reaches ``1 - tail``."""
    if not 0.0 < tail < 1.0:
        raise InvalidInputError(f"tail must lie in (0, 1), got {tail!r}")
    target = 1.0 - tail
    # start near mean + several standard deviations and grow geometrically
    guess = max(16, int(params.mu + 10.0 * math.sqrt(params.variance)))
    while True:
        cdf = np.cumsum(compound_poisson_pmf(params, guess))
        hit = np.nonzero(cdf >= target)[0]
        if hit.size:
            return int(hit[0])
        guess *= 2


def beam_split(input_pmf, splitter):
    """Split a photon-number distribution into the two output channels.

    ``P(k1, k2) = P(k1 + k2) * C(k1 + k2, k1) * p**k1 * (1 - p)**k2`` on the
    square lattice ``{0..k_max}**2``.  The joint masses are renormalized;
    the kept input mass is available as ``total_mass``.
    """
    pmf = np.asarray(input_pmf, dtype=float)
    if pmf.ndim != 1 or pmf.size == 0:
        raise InvalidInputError("input pmf must be a non-empty vector")
    if not np.all(np.isfinite(pmf)) or np.any(pmf < 0):
        raise InvalidInputError("input pmf must be finite and nonnegative")
    k_max = pmf.size - 1
    k = np.arange(k_max + 1)
    lgam = np.array([math.lgamma(v + 1.0) for v in range(2 * k_max + 1)])
    k1 = k[:, None]
    k2 = k[None, :]
    n = k1 + k2
    inside = n <= k_max
    n_in = np.where(inside, n, 0)
    with np.errstate(divide="ignore"):
        log_input = np.log(pmf)
        log_kernel = (
            lgam[n] - lgam[k1] - lgam[k2]
            + k1 * math.log(splitter.p) + k2 * math.log1p(-splitter.p)
        )
    joint = np.where(inside, np.exp(log_input[n_in] + log_kernel), 0.0)
    total = float(joint.sum())
    if total == 0:
        raise EmptySupportError("input pmf has no mass")
    axis_a = LatticeAxis(k_max, "k1")
    axis_b = LatticeAxis(k_max, "k2")
    dist = JointDistribution2D.from_mass(joint / total, axis_a, axis_b)
    return JointDistribution2D(axis_a, axis_b, dist.mass, total)


def pearson_closed_form(params, splitter):
    """Pearson correlation of the output channels from ``g2 = 1 + 1/a``."""
    g = params.g2 - 1.0
    mu, p = params.mu, splitter.p
    return g / math.sqrt((g + 1.0 / (p * mu)) * (g + 1.0 / ((1.0 - p) * mu)))


@dataclass(frozen=True)
class SweepRow:
    a: float
    mu: float
    p: float
    pearson_cf: float
    pearson_num: float
    schmidt_rho_sq: float
    schmidt_K: float
    k_max: int = -1
    error: str = None

    def values(self):
        return tuple(getattr(self, name) for name in SWEEP_COLUMNS)


def correlation_point(a, mu, p, tail=DEFAULT_TAIL):
    """All correlation measures at one parameter point."""
    params = CompoundPoissonParams(mu, a)
    splitter = BeamSplitterParams(p)
    k_max = choose_truncation(params, tail)
    joint = beam_split(compound_poisson_pmf(params, k_max), splitter)
    spectrum, _ = schmidt_decompose(embed_amplitude(joint))
    return SweepRow(
        a=params.a,
        mu=params.mu,
        p=splitter.p,
        pearson_cf=pearson_closed_form(params, splitter),
        pearson_num=pearson_correlation(joint),
        schmidt_rho_sq=spectrum.correlation_sq,
        schmidt_K=spectrum.schmidt_number,
        k_max=k_max,
    )


def _safe_point(a, mu, p, tail):
    try:
        return correlation_point(a, mu, p, tail)
    except (SchmidtError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.warning("sweep point a=%g mu=%g failed: %s", a, mu, exc)
        nan = float("nan")
        return SweepRow(a, mu, p, nan, nan, nan, nan, error=f"{type(exc).__name__}: {exc}")


def correlation_sweep(spec, max_workers=None):
    """Evaluate :func:`correlation_point` over a grid of ``(a, mu)``.

    Rows follow ``spec.points()`` order whatever ``max_workers`` is.  A
    failing point yields a row of NaNs with ``error`` set instead of
    aborting the sweep.
    """
    points = spec.points()
    args = [(a, mu, spec.p, spec.truncation_tail) for a, mu in points]
    if max_workers is None or max_workers <= 1:
        return [_safe_point(*x) for x in args]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda x: _safe_point(*x), args))
