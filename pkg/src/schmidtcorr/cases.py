"""Ready-made distributions and matrices for the worked examples."""

import numpy as np

from .distributions import GridAxis, build_grid_distribution

# Correlation matrix of the four-variable normal example; x1, x2 | x3, x4.
FOUR_VARIABLE_CORRELATION = np.array(
    [
        [1.0, 0.7, 0.8, 0.85],
        [0.7, 1.0, 0.9, 0.65],
        [0.8, 0.9, 1.0, 0.75],
        [0.85, 0.65, 0.75, 1.0],
    ]
)


def noisy_quadratic_axes(cells=512):
    return GridAxis("x1", -1.0, 1.0, cells), GridAxis("x2", 0.0, 1.1, cells)


def noisy_quadratic_density(x1, x2, low=0.9, high=1.1):
    """Indicator of ``low*(1 - x1**2) <= x2 <= high*(1 - x1**2)``."""
    f = 1.0 - x1 * x1
    return ((x2 >= low * f) & (x2 <= high * f)).astype(float)


def noisy_quadratic(cells=512):
    """Uniform distribution on the band between ``0.9(1-x1^2)`` and ``1.1(1-x1^2)``."""
    axis_a, axis_b = noisy_quadratic_axes(cells)
    return build_grid_distribution(noisy_quadratic_density, axis_a, axis_b)


def bivariate_normal_density(rho, sigma_a=1.0, sigma_b=1.0, mean_a=0.0, mean_b=0.0):
    def density(x, y):
        u = (x - mean_a) / sigma_a
        v = (y - mean_b) / sigma_b
        q = (u * u - 2 * rho * u * v + v * v) / (1 - rho * rho)
        return np.exp(-0.5 * q) / (2 * np.pi * sigma_a * sigma_b * np.sqrt(1 - rho * rho))

    return density


def bivariate_normal(rho, cells=512, half_range=6.0, sigma_a=1.0, sigma_b=1.0, mean_a=0.0, mean_b=0.0):
    """Gridded bivariate normal on ``mean +- half_range * sigma`` per axis."""
    axis_a = GridAxis.symmetric("x1", mean_a, half_range * sigma_a, cells)
    axis_b = GridAxis.symmetric("x2", mean_b, half_range * sigma_b, cells)
    density = bivariate_normal_density(rho, sigma_a, sigma_b, mean_a, mean_b)
    return build_grid_distribution(density, axis_a, axis_b)
