"""phasequant: numerical toolkit for phase-space quantum states.

Builds density operators from a phase-space probability density and a
window state along two independent routes (projector quadrature and
Weyl quantization of a convolved symbol), validates the density-operator
conditions, checks symplectic covariance, and estimates the modulation
norms behind the trace-class reasoning.
"""

from .grid import (
    OperatorMatrix,
    PhaseFunction,
    PhaseGrid,
    WaveFunction,
    l2_inner,
    l2_norm,
    make_grid,
    normalize,
)
from .metaplectic import (
    Chirp,
    Dilate,
    Fourier,
    FOURIER_SYMPLECTIC,
    inverse_word,
    metaplectic_apply,
    toeplitz_covariance_residual,
    weyl_covariance_residual,
    word_matrix,
    word_symplectic,
)
from .modspace import NormEstimate, m1_norm, m1inf_norm, m1_norm_phase
from .statecheck import DensityReport, spectral, validate_density, wigner_of_density
from .toeplitz import (
    LatticeMixture,
    ProbabilityDensity,
    density_from_measure,
    gaussian_density,
    lattice_mixed_state,
    toeplitz_conv,
    toeplitz_direct,
)
from .transforms import (
    PhasePoint,
    cross_ambiguity,
    cross_wigner,
    displace,
    standard_window,
    symplectic_fourier,
)
from .weyl import projector, trace_via_symbol, weyl_quantize, weyl_symbol

__version__ = "0.1.0"

__all__ = [
    "Chirp",
    "DensityReport",
    "Dilate",
    "FOURIER_SYMPLECTIC",
    "Fourier",
    "LatticeMixture",
    "NormEstimate",
    "OperatorMatrix",
    "PhaseFunction",
    "PhaseGrid",
    "PhasePoint",
    "ProbabilityDensity",
    "WaveFunction",
    "cross_ambiguity",
    "cross_wigner",
    "density_from_measure",
    "displace",
    "gaussian_density",
    "inverse_word",
    "l2_inner",
    "l2_norm",
    "lattice_mixed_state",
    "m1_norm",
    "m1_norm_phase",
    "m1inf_norm",
    "make_grid",
    "metaplectic_apply",
    "normalize",
    "projector",
    "spectral",
    "standard_window",
    "symplectic_fourier",
    "toeplitz_conv",
    "toeplitz_covariance_residual",
    "toeplitz_direct",
    "trace_via_symbol",
    "validate_density",
    "weyl_covariance_residual",
    "weyl_quantize",
    "weyl_symbol",
    "wigner_of_density",
    "word_matrix",
    "word_symplectic",
]
