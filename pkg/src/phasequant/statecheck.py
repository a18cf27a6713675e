"""Density-operator validation: hermiticity, trace, spectrum, positivity.

A candidate density operator must be self-adjoint, positive semidefinite,
and have unit trace.  Matrices are symmetrized before eigendecomposition
(quadrature noise produces harmless anti-hermitian parts); the defect is
reported separately.  The eigenproblem of the weighted operator
(A psi)(x) = sum K psi dx is the ordinary hermitian eigenproblem of K*dx.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import OperatorMatrix, PhaseFunction, WaveFunction
from .weyl import weyl_symbol

__all__ = ["DensityReport", "validate_density", "spectral", "wigner_of_density"]

HERMITICITY_TOL = 1e-8


@dataclass(frozen=True)
class DensityReport:
    """Validation verdict for a candidate density operator."""

    hermiticity_defect: float
    trace: float
    trace_defect: float
    min_eigenvalue: float
    eigenvalues: np.ndarray = field(repr=False)
    purity: float
    verdict: bool
    tol_trace: float
    tol_psd: float

    def as_dict(self) -> dict:
        d = {
            "hermiticity_defect": self.hermiticity_defect,
            "trace": self.trace,
            "trace_defect": self.trace_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "purity": self.purity,
            "verdict": bool(self.verdict),
            "tol_trace": self.tol_trace,
            "tol_psd": self.tol_psd,
            "eigenvalues": [float(v) for v in self.eigenvalues],
        }
        return d


def _weighted_eigh(A: OperatorMatrix):
    """Descending eigensystem of the symmetrized, dx-weighted operator."""
    K = 0.5 * (A.entries + A.entries.conj().T)
    try:
        evals, evecs = np.linalg.eigh(K * A.grid.dx)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(evals)[::-1]
    return evals[order], evecs[:, order]


def validate_density(A: OperatorMatrix, tol_trace: float = 1e-6,
                     tol_psd: float = 1e-8) -> DensityReport:
    """Check the three density-operator conditions and report diagnostics.

    Verdict is true iff hermiticity defect <= 1e-8, |trace - 1| <= tol_trace,
    and min eigenvalue >= -tol_psd relative to the largest eigenvalue.
    Eigenvalues below the positivity floor are clamped to zero for the purity
    figure; the raw minimum is always reported.
    """
    if tol_trace <= 0 or tol_psd <= 0:
        raise ValueError("tolerances must be positive")
    defect = A.hermiticity_defect()
    trace = float(np.real(A.trace()))
    evals, _ = _weighted_eigh(A)
    lam_max = float(evals[0]) if evals.size else 0.0
    floor = tol_psd * max(abs(lam_max), 1e-300)
    clamped = np.where(evals < floor, 0.0, evals)
    purity = float(np.sum(clamped**2))
    verdict = (defect <= HERMITICITY_TOL
               and abs(trace - 1.0) <= tol_trace
               and float(evals[-1]) >= -floor)
    return DensityReport(
        hermiticity_defect=defect,
        trace=trace,
        trace_defect=abs(trace - 1.0),
        min_eigenvalue=float(evals[-1]),
        eigenvalues=evals,
        purity=purity,
        verdict=verdict,
        tol_trace=tol_trace,
        tol_psd=tol_psd,
    )


def spectral(A: OperatorMatrix, tol_herm: float = HERMITICITY_TOL):
    """Eigenvalues (descending) and dx-orthonormal eigenvectors as states.

    Raises on inputs whose hermiticity defect exceeds ``tol_herm``.
    """
    defect = A.hermiticity_defect()
    if defect > tol_herm:
        raise ValueError(f"spectral requires a hermitian matrix; defect = {defect}")
    evals, evecs = _weighted_eigh(A)
    dx = A.grid.dx
    states = [WaveFunction(A.grid, evecs[:, k] / np.sqrt(dx)) for k in range(evals.size)]
    return evals, states


def wigner_of_density(A: OperatorMatrix) -> PhaseFunction:
    """Wigner distribution of a density operator: weyl_symbol / (2 pi hbar)."""
    defect = A.hermiticity_defect()
    if defect > HERMITICITY_TOL:
        raise ValueError(f"wigner_of_density requires a hermitian matrix; defect = {defect}")
    sym = weyl_symbol(A)
    return PhaseFunction(A.grid, sym.values / (2.0 * np.pi * A.grid.hbar))
