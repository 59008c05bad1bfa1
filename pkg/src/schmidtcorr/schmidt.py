"""Schmidt decomposition of real amplitude matrices.

For a real amplitude matrix the Schmidt decomposition is its SVD: the
weights are the squared singular values and the modes are the singular
vectors.  From the weights follow the Schmidt number ``K = 1 / sum(w**2)``
and the Schmidt correlation coefficient ``1 - 1/K**2``.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidInputError, InvalidSpectrumError

__all__ = [
    "SchmidtSpectrum",
    "SchmidtModes",
    "schmidt_decompose",
    "schmidt_number",
    "schmidt_correlation",
    "DEFAULT_WEIGHT_FLOOR",
]

DEFAULT_WEIGHT_FLOOR = 1e-12
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Raw (unrenormalized) Schmidt weights with derived summaries.

    ``tail_mass`` is the total weight discarded below the floor, and
    ``weight_sum`` the sum of the full spectrum before truncation.
    """

    weights: np.ndarray
    schmidt_number: float
    correlation_sq: float
    tail_mass: float = 0.0
    weight_sum: float = 1.0

    @property
    def rank(self):
        return len(self.weights)


@dataclass(frozen=True)
class SchmidtModes:
    """Orthonormal Schmidt modes as matrix columns (discrete normalization)."""

    modes_a: np.ndarray
    modes_b: np.ndarray
    axis_a: object = None
    axis_b: object = None

    @property
    def count(self):
        return self.modes_a.shape[1]

    def continuous_a(self, k):
        return self.axis_a.to_continuous(self.modes_a[:, k])

    def continuous_b(self, k):
        return self.axis_b.to_continuous(self.modes_b[:, k])


def schmidt_number(weights):
    """``1 / sum(w**2)`` for a normalized, nonnegative spectrum."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size == 0:
        raise InvalidSpectrumError("empty Schmidt spectrum")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidSpectrumError("Schmidt weights must be finite and nonnegative")
    total = w.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise InvalidSpectrumError(f"Schmidt weights sum to {total:.12g}, not 1")
    return float(1.0 / np.sum(w**2))


def schmidt_correlation(K):
    """Schmidt correlation coefficient ``1 - 1/K**2`` (a squared quantity)."""
    if not np.isfinite(K) or K < 1.0:
        raise InvalidInputError(f"Schmidt number must be >= 1, got {K!r}")
    return float(1.0 - 1.0 / (K * K))


def _amplitude_entries(amp):
    return np.asarray(getattr(amp, "entries", amp), dtype=float)


def schmidt_decompose(amp, weight_floor=DEFAULT_WEIGHT_FLOOR):
    """Schmidt spectrum and modes of an amplitude matrix.

    Parameters
    ----------
    amp : AmplitudeMatrix or array_like
        Unit-Frobenius-norm real amplitudes.
    weight_floor : float
        Weights below this value are dropped.  The dropped mass is reported
        as ``tail_mass``; retained weights are not renormalized.

    Returns
    -------
    (SchmidtSpectrum, SchmidtModes)
    """
    if not 0.0 <= weight_floor < 1.0:
        raise InvalidInputError(f"weight_floor must lie in [0, 1), got {weight_floor!r}")
    entries = _amplitude_entries(amp)
    res = linalg.svd(entries)
    weights = res.singular_values**2
    weight_sum = float(weights.sum())
    if abs(weight_sum - 1.0) > NORMALIZATION_TOL:
        raise InvalidInputError(f"amplitude matrix has squared norm {weight_sum:.12g}, not 1")
    keep = weights >= weight_floor
    keep[0] = True
    kept = weights[keep]
    K = float(1.0 / np.sum(kept**2))
    spectrum = SchmidtSpectrum(
        weights=kept,
        schmidt_number=K,
        correlation_sq=schmidt_correlation(max(K, 1.0)),
        tail_mass=float(weights[~keep].sum()),
        weight_sum=weight_sum,
    )
    modes = SchmidtModes(
        modes_a=res.left_vectors[:, keep],
        modes_b=res.right_vectors[:, keep],
        axis_a=getattr(amp, "axis_a", None),
        axis_b=getattr(amp, "axis_b", None),
    )
    return spectrum, modes
