"""Weyl correspondence: symbol -> operator matrix and back.

Quantization uses the kernel formula

    K(x, y) = (2 pi hbar)^-1 int exp(i p (x-y)/hbar) a((x+y)/2, p) dp,

with the symbol spectrally upsampled 2x in BOTH variables: the x-upsampling
supplies the midpoints (x_j + x_k)/2 exactly, and the p-upsampling moves the
kernel's periodization in (x - y) out to 4L so the physical offset range
(-2L, 2L) is alias-free.

The symbol direction inverts the displacement expansion instead of
interpolating the kernel: K is read along its skew diagonals
K(x, x - u) (integer indices only, zero-extended), transformed to the chord
function a_sigma(u, p0) = int exp(-i p0 (x - u/2)/hbar) K(x, x-u) dx, and the
symbol is recovered as its symplectic Fourier transform.  Unlike half-point
kernel interpolation this is exact on identity-like operators, whose kernels
carry full-band content that interpolation cannot represent.
"""

from __future__ import annotations

import numpy as np

from .grid import OperatorMatrix, PhaseFunction, PhaseGrid, WaveFunction
from .transforms import cft, upsample2

__all__ = [
    "weyl_quantize",
    "weyl_symbol",
    "projector",
    "trace_via_symbol",
]


def weyl_quantize(a: PhaseFunction) -> OperatorMatrix:
    """Operator matrix of Op_W(a) via the kernel formula."""
    g = a.grid
    n = g.n_points
    hbar = g.hbar
    ahh = upsample2(upsample2(a.values, axis=0), axis=1)     # (2N, 2N)
    # G[s, d] = sum_l exp(+i q_l (d dx)/hbar) ahh[s, l] dp/2 on the fine p grid
    G = cft(ahh, -0.5 * n * g.dp, 0.5 * g.dp, 0.0, g.dx, hbar, +1, axis=1)
    jj, kk = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    K = G[jj + kk, (jj - kk) % (2 * n)] / (2.0 * np.pi * hbar)
    return OperatorMatrix(g, K)


def weyl_symbol(A: OperatorMatrix) -> PhaseFunction:
    """Weyl symbol of an operator matrix (exact inverse-expansion route)."""
    g = A.grid
    n = g.n_points
    hbar = g.hbar
    K = A.entries
    t = np.arange(2 * n)
    shift = t - n                       # u_t = shift * dx in [-2L, 2L)
    u = shift * g.dx
    jj = np.arange(n)
    cols = jj[None, :] - shift[:, None]
    ok = (cols >= 0) & (cols < n)
    diag = np.where(ok, K[jj[None, :], np.clip(cols, 0, n - 1)], 0.0)
    # chord[t, l] = e^{+i p_l u_t/(2 hbar)} sum_j e^{-i p_l x_j/hbar} K[j, j-shift] dx
    chord = cft(diag, g.x[0], g.dx, g.p[0], g.dp, hbar, -1, axis=1)
    chord *= np.exp(0.5j * np.outer(u, g.p) / hbar)
    # a(x, p) = (2 pi hbar)^-1 iint e^{-i(p u - x p0)/hbar} chord(u, p0) du dp0
    inner = cft(chord, g.p[0], g.dp, g.x[0], g.dx, hbar, +1, axis=1)       # p0 -> x
    outer = cft(inner, u[0], g.dx, -0.5 * n * g.dp, 0.5 * g.dp, hbar, -1, axis=0)  # u -> p
    return PhaseFunction(g, outer[::2, :].T / (2.0 * np.pi * hbar))


def projector(phi: WaveFunction, tol: float = 1e-8) -> OperatorMatrix:
    """Rank-one projector |phi><phi| as an operator matrix.

    Requires a unit-norm window; entries are phi(x_j) phi*(x_k).
    """
    nrm = phi.norm()
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"projector requires a unit-norm state, got ||phi|| = {nrm}")
    return OperatorMatrix(phi.grid, np.outer(phi.samples, phi.samples.conj()))


def trace_via_symbol(a: PhaseFunction) -> float:
    """Tr Op_W(a) = (2 pi hbar)^-1 * integral of the symbol."""
    g = a.grid
    return float(np.real(np.sum(a.values)) * g.dx * g.dp / (2.0 * np.pi * g.hbar))
