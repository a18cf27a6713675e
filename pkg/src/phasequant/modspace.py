"""Modulation-norm estimators used as trace-class finiteness diagnostics.

``m1_norm`` is the integrable-cross-Wigner norm of a state against a unit
window.  ``m1inf_norm`` estimates the mixed norm of a phase-space symbol:
the cross-Wigner transform of the symbol against a 2D Gaussian window is
computed on a coarse 4D lattice, the sup is taken over the frequency pair,
and the result is integrated over the base point.  These are diagnostics,
not certified bounds: every estimate carries its resolution descriptor, and
the acceptance gate only asserts finiteness plus stability under refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PhaseFunction, WaveFunction, _require_same_grid
from .transforms import cft, cross_wigner, phase_interpolator

__all__ = ["NormEstimate", "m1_norm", "m1inf_norm", "m1_norm_phase"]


@dataclass(frozen=True)
class NormEstimate:
    """A norm value together with how it was estimated."""

    value: float
    grid_resolution: str
    window_id: str


def m1_norm(psi: WaveFunction, phi: WaveFunction) -> NormEstimate:
    """L1 norm of the cross-Wigner transform against a unit window."""
    _require_same_grid(psi, phi)
    nrm = phi.norm()
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"m1_norm window must be unit-norm, got {nrm}")
    g = psi.grid
    W = cross_wigner(psi, phi)
    value = float(np.sum(np.abs(W.values)) * g.dx * g.dp)
    return NormEstimate(value, f"N={g.n_points},L={g.half_width}", "state-window")


def _effective_radius(a: PhaseFunction, rel: float = 1e-8) -> float:
    """Half-width of the centered square covering |a| >= rel * max|a|."""
    vals = np.abs(a.values)
    scale = float(vals.max())
    if scale <= 0:
        return a.grid.dx
    X, P = a.grid.meshgrid()
    mask = vals >= rel * scale
    return float(max(np.max(np.abs(X[mask])), np.max(np.abs(P[mask]))))


def _window_cross_wigner_4d(a: PhaseFunction, b_scale: float, points: int):
    """|W(a, b)| on a coarse (z, zeta) lattice, b a unit 2D Gaussian.

    Returns (absW, dz, dzeta) with absW shaped (points, points, points,
    points) indexed (z1, z2, zeta1, zeta2).
    """
    if points < 8:
        raise ValueError(f"need at least 8 points per axis, got {points}")
    if b_scale <= 0:
        raise ValueError("b_scale must be positive")
    g = a.grid
    hbar = g.hbar
    r_a = _effective_radius(a)
    r_b = 5.0 * b_scale
    r_z = r_a + r_b
    r_y = r_a + r_b          # |y| <= |z + y/2| + |z - y/2| bounds the support
    zs = np.linspace(-r_z, r_z, points, endpoint=False)
    dz = zs[1] - zs[0]
    dy = 2.0 * r_y / points
    ys = -r_y + dy * np.arange(points)
    dzeta = 2.0 * np.pi * hbar / (points * dy)
    zeta0 = -0.5 * points * dzeta

    interp = phase_interpolator(a)
    Z1, Z2, Y1, Y2 = np.meshgrid(zs, zs, ys, ys, indexing="ij")
    plus = interp(Z1 + 0.5 * Y1, Z2 + 0.5 * Y2)
    minus1 = Z1 - 0.5 * Y1
    minus2 = Z2 - 0.5 * Y2
    b = np.exp(-(minus1**2 + minus2**2) / (2.0 * b_scale**2)) / (np.sqrt(np.pi) * b_scale)
    integrand = plus * b          # b is real

    out = cft(integrand, ys[0], dy, zeta0, dzeta, hbar, -1, axis=2)
    out = cft(out, ys[0], dy, zeta0, dzeta, hbar, -1, axis=3)
    absW = np.abs(out) / (2.0 * np.pi * hbar) ** 2
    return absW, dz, dzeta


def m1inf_norm(a: PhaseFunction, b_scale: float = 1.0,
               points_per_axis: int = 24) -> NormEstimate:
    """Mixed-norm estimate: integral over z of sup over zeta of |W(a, b)|."""
    absW, dz, _ = _window_cross_wigner_4d(a, b_scale, points_per_axis)
    sup = absW.max(axis=(2, 3))
    value = float(sup.sum() * dz * dz)
    return NormEstimate(value, f"{points_per_axis} pts/axis", f"gaussian(b_scale={b_scale})")


def m1_norm_phase(a: PhaseFunction, b_scale: float = 1.0,
                  points_per_axis: int = 24) -> NormEstimate:
    """Integrable-norm estimate on phase space: L1 of |W(a, b)| over (z, zeta)."""
    absW, dz, dzeta = _window_cross_wigner_4d(a, b_scale, points_per_axis)
    value = float(absW.sum() * dz * dz * dzeta * dzeta)
    return NormEstimate(value, f"{points_per_axis} pts/axis", f"gaussian(b_scale={b_scale})")
