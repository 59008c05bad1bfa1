"""Discretized bipartite distributions and their square-root embedding.

A :class:`JointDistribution2D` holds cell masses on a product of two axes.
Each axis is either a :class:`GridAxis` (uniform cells on an interval,
sampled at cell centers) or a :class:`LatticeAxis` (integer support
``0..k_max`` with unit cell measure).

Masses on a grid axis already include the cell measure ``da * db``.  The
amplitude matrix is therefore the discrete state, and a singular vector
``u`` over a grid axis approximates the continuous mode as ``u / sqrt(da)``
(see :meth:`GridAxis.to_continuous`).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMarginalError, EmptySupportError, InvalidInputError

__all__ = [
    "GridAxis",
    "LatticeAxis",
    "JointDistribution2D",
    "AmplitudeMatrix",
    "build_grid_distribution",
    "embed_amplitude",
    "marginals",
    "pearson_correlation",
    "MASS_TOLERANCE",
]

MASS_TOLERANCE = 1e-6


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GridAxis:
    label: str
    lower: float
    upper: float
    cells: int

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise InvalidInputError(f"axis {self.label!r}: bounds must be finite")
        if not self.upper > self.lower:
            raise InvalidInputError(
                f"axis {self.label!r}: upper ({self.upper}) must exceed lower ({self.lower})"
            )
        if int(self.cells) != self.cells or self.cells < 2:
            raise InvalidInputError(f"axis {self.label!r}: need at least 2 cells")

    @classmethod
    def symmetric(cls, label, center, half_width, cells):
        return cls(label, center - half_width, center + half_width, cells)

    @property
    def width(self):
        return (self.upper - self.lower) / self.cells

    @property
    def centers(self):
        return self.lower + (np.arange(self.cells) + 0.5) * self.width

    def to_continuous(self, vector):
        """Convert a unit-norm discrete mode to samples of a continuous one."""
        return np.asarray(vector) / np.sqrt(self.width)

    def to_json(self):
        return {"label": self.label, "lower": self.lower, "upper": self.upper, "cells": self.cells}


@dataclass(frozen=True)
class LatticeAxis:
    k_max: int
    label: str = "k"

    def __post_init__(self):
        if int(self.k_max) != self.k_max or self.k_max < 0:
            raise InvalidInputError(f"lattice k_max must be a nonnegative integer, got {self.k_max!r}")

    @property
    def cells(self):
        return self.k_max + 1

    @property
    def width(self):
        return 1.0

    @property
    def centers(self):
        return np.arange(self.k_max + 1, dtype=float)

    def to_continuous(self, vector):
        return np.asarray(vector, dtype=float)

    def to_json(self):
        return {"label": self.label, "lattice": True, "k_max": self.k_max}


def axis_from_json(obj, default_label="x"):
    """Parse an axis description ``{label, lower, upper, cells}`` or ``{lattice: true, k_max}``."""
    if not isinstance(obj, dict):
        raise InvalidInputError(f"axis description must be an object, got {type(obj).__name__}")
    label = str(obj.get("label", default_label))
    try:
        if obj.get("lattice"):
            return LatticeAxis(int(obj["k_max"]), label)
        return GridAxis(label, float(obj["lower"]), float(obj["upper"]), int(obj["cells"]))
    except KeyError as exc:
        raise InvalidInputError(f"axis {label!r}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"axis {label!r}: {exc}") from None


@dataclass(frozen=True)
class JointDistribution2D:
    """Normalized probability masses over ``axis_a x axis_b``.

    ``total_mass`` records the sum of the masses before renormalization
    (e.g. the kept mass of a truncated photon-number distribution, or the
    quadrature estimate of a density's integral).
    """

    axis_a: object
    axis_b: object
    mass: np.ndarray
    total_mass: float = 1.0

    @classmethod
    def from_mass(cls, mass, axis_a, axis_b, tolerance=MASS_TOLERANCE):
        """Validate and renormalize a mass matrix.

        Inputs whose total deviates from 1 by more than ``tolerance`` are
        rejected; smaller deviations are renormalized away.
        """
        m = np.array(mass, dtype=float)
        if m.ndim != 2:
            raise InvalidInputError(f"mass must be a 2-D matrix, got shape {m.shape}")
        if m.shape != (axis_a.cells, axis_b.cells):
            raise InvalidInputError(
                f"mass shape {m.shape} does not match axes ({axis_a.cells}, {axis_b.cells})"
            )
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("mass contains non-finite entries")
        if np.any(m < 0):
            raise InvalidInputError("mass contains negative entries")
        total = float(m.sum())
        if total == 0:
            raise EmptySupportError("distribution has no mass")
        if abs(total - 1.0) > tolerance:
            raise InvalidInputError(
                f"total mass {total:.12g} differs from 1 by more than {tolerance:g}"
            )
        return cls(axis_a, axis_b, _frozen(m / total), total)

    @property
    def shape(self):
        return self.mass.shape


@dataclass(frozen=True)
class AmplitudeMatrix:
    """Entrywise square root of a joint distribution (zero phase)."""

    entries: np.ndarray
    axis_a: object
    axis_b: object
    source: JointDistribution2D = field(default=None, repr=False, compare=False)

    @property
    def shape(self):
        return self.entries.shape


def build_grid_distribution(density, axis_a, axis_b):
    """Discretize a nonnegative density by the midpoint rule and renormalize.

    ``density`` is called once with two broadcastable coordinate arrays
    (``ij`` indexing) and must return the density at the cell centers.

    Raises
    ------
    EmptySupportError
        If the sampled density vanishes at every cell center.
    """
    xa, xb = np.meshgrid(axis_a.centers, axis_b.centers, indexing="ij")
    values = np.broadcast_to(np.asarray(density(xa, xb), dtype=float), xa.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("density returned non-finite values on the grid")
    if np.any(values < 0):
        raise InvalidInputError("density is negative somewhere on the grid")
    mass = values * (axis_a.width * axis_b.width)
    total = float(mass.sum())
    if total == 0:
        raise EmptySupportError("density vanishes at every grid cell center")
    return JointDistribution2D(axis_a, axis_b, _frozen(mass / total), total)


def embed_amplitude(dist):
    return AmplitudeMatrix(_frozen(np.sqrt(dist.mass)), dist.axis_a, dist.axis_b, dist)


def marginals(dist):
    return dist.mass.sum(axis=1), dist.mass.sum(axis=0)


def pearson_correlation(dist):
    """Pearson correlation of the two axis coordinates, evaluated at cell centers.

    Raises
    ------
    DegenerateMarginalError
        If either coordinate has zero variance under ``dist``.
    """
    pa, pb = marginals(dist)
    xa, xb = dist.axis_a.centers, dist.axis_b.centers
    da = xa - pa @ xa
    db = xb - pb @ xb
    var_a = pa @ da**2
    var_b = pb @ db**2
    scale_a = max(np.max(np.abs(xa)), 1.0)
    scale_b = max(np.max(np.abs(xb)), 1.0)
    if var_a <= (1e-14 * scale_a) ** 2 or var_b <= (1e-14 * scale_b) ** 2:
        raise DegenerateMarginalError("a marginal has zero variance; Pearson correlation undefined")
    cov = da @ dist.mass @ db
    rho = cov / np.sqrt(var_a * var_b)
    return float(np.clip(rho, -1.0, 1.0))
