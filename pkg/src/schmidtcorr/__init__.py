"""Schmidt-decomposition correlation analysis of classical probability distributions."""

__version__ = "0.1.0"

from .distributions import (
    AmplitudeMatrix,
    GridAxis,
    JointDistribution2D,
    LatticeAxis,
    build_grid_distribution,
    embed_amplitude,
    marginals,
    pearson_correlation,
)
from .errors import DomainError, InvalidInputError, SchmidtError
from .gaussian import (
    GaussianSpec,
    bivariate_schmidt_number,
    canonical_correlations,
    canonical_weights,
    decompose_gaussian,
    enumerate_mode_weights,
    geometric_weights,
    hermite_mode,
    multiple_correlation_det,
    multivariate_schmidt_modes,
)
from .photon import (
    BeamSplitterParams,
    CompoundPoissonParams,
    SweepSpec,
    beam_split,
    choose_truncation,
    compound_poisson_pmf,
    correlation_sweep,
    pearson_closed_form,
)
from .schmidt import SchmidtModes, SchmidtSpectrum, schmidt_correlation, schmidt_decompose, schmidt_number
