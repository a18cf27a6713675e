"""Slow reference implementations used to cross-check the FFT paths.

Each oracle evaluates the same discretized formula as the corresponding
production routine but with explicit summation loops, so FFT bookkeeping
(orderings, phase ramps, index maps) is checked against plain arithmetic.
``weyl_quantize_operator_sum`` is the independent displacement-expansion
quantizer: it builds the operator as a weighted sum of displacement
matrices, sharing no code with the kernel-formula path.

Also here: harmonic-oscillator eigenfunctions via the stable Hermite
recurrence, used as the eigenbasis oracle for thermal spectra.
"""

from __future__ import annotations

import numpy as np

from .grid import OperatorMatrix, PhaseFunction, PhaseGrid, WaveFunction
from .transforms import displace, symplectic_fourier, upsample2

__all__ = [
    "cross_wigner_direct",
    "cross_ambiguity_direct",
    "symplectic_fourier_direct",
    "weyl_quantize_direct",
    "weyl_symbol_direct",
    "weyl_quantize_operator_sum",
    "hermite_state",
]


def _take0(arr: np.ndarray, idx: int):
    return arr[idx] if 0 <= idx < arr.size else 0.0


def cross_wigner_direct(psi: WaveFunction, phi: WaveFunction) -> PhaseFunction:
    """O(N^2 * 2N) loop evaluation of the cross-Wigner quadrature."""
    g = psi.grid
    n = g.n_points
    hbar = g.hbar
    psih = psi.half_samples()
    phih = phi.half_samples()
    y = -2.0 * g.half_width + g.dx * np.arange(2 * n)
    W = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for m in range(2 * n):
                val = _take0(psih, 2 * j + m - n) * np.conj(_take0(phih, 2 * j - m + n))
                acc += np.exp(-1j * g.p[k] * y[m] / hbar) * val
            W[j, k] = acc * g.dx / (2.0 * np.pi * hbar)
    return PhaseFunction(g, W)


def cross_ambiguity_direct(psi: WaveFunction, phi: WaveFunction) -> PhaseFunction:
    """Loop evaluation of the cross-ambiguity quadrature."""
    g = psi.grid
    n = g.n_points
    hbar = g.hbar
    psih = psi.half_samples()
    phih = phi.half_samples()
    y = -2.0 * g.half_width + g.dx * np.arange(2 * n)
    A = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for m in range(2 * n):
                val = (_take0(psih, 2 * m + j - 3 * n // 2)
                       * np.conj(_take0(phih, 2 * m - j - n // 2)))
                acc += np.exp(-1j * g.p[k] * y[m] / hbar) * val
            A[j, k] = acc * g.dx / (2.0 * np.pi * hbar)
    return PhaseFunction(g, A)


def cross_ambiguity_point(psi: WaveFunction, phi: WaveFunction, z) -> complex:
    """Quadrature of the ambiguity integral at a single (off-grid) point,
    using the half-step grid for y."""
    g = psi.grid
    hbar = g.hbar
    x0, p0 = float(z[0]), float(z[1])
    if psi.generator is None or phi.generator is None:
        raise ValueError("point evaluation needs analytic generators")
    dy = 0.5 * g.dx
    y = -2.0 * g.half_width + dy * np.arange(4 * g.n_points)
    vals = psi.generator(y + 0.5 * x0) * np.conj(phi.generator(y - 0.5 * x0))
    return complex(np.sum(np.exp(-1j * p0 * y / hbar) * vals) * dy / (2.0 * np.pi * hbar))


def symplectic_fourier_direct(a: PhaseFunction) -> PhaseFunction:
    """O(N^4) loop evaluation of the symplectic Fourier quadrature."""
    g = a.grid
    n = g.n_points
    hbar = g.hbar
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for jp in range(n):
                for kp in range(n):
                    sigma = g.p[k] * g.x[jp] - g.x[j] * g.p[kp]
                    acc += np.exp(-1j * sigma / hbar) * a.values[jp, kp]
            out[j, k] = acc * g.dx * g.dp / (2.0 * np.pi * hbar)
    return PhaseFunction(g, out)


def weyl_quantize_direct(a: PhaseFunction) -> OperatorMatrix:
    """Loop evaluation of the kernel-formula quantizer (fine p grid)."""
    g = a.grid
    n = g.n_points
    hbar = g.hbar
    ahh = upsample2(upsample2(a.values, axis=0), axis=1)
    q = -0.5 * n * g.dp + 0.5 * g.dp * np.arange(2 * n)
    K = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            u = (j - k) % (2 * n) * g.dx
            acc = 0.0 + 0.0j
            for l in range(2 * n):
                acc += np.exp(1j * q[l] * u / hbar) * ahh[j + k, l]
            K[j, k] = acc * 0.5 * g.dp / (2.0 * np.pi * hbar)
    return OperatorMatrix(g, K)


def weyl_symbol_direct(A: OperatorMatrix) -> PhaseFunction:
    """Loop evaluation of the displacement-expansion symbol."""
    g = A.grid
    n = g.n_points
    hbar = g.hbar
    K = A.entries
    u = -2.0 * g.half_width + g.dx * np.arange(2 * n)
    chord = np.zeros((2 * n, n), dtype=complex)
    for t in range(2 * n):
        s = t - n
        for l in range(n):
            acc = 0.0 + 0.0j
            for j in range(n):
                if 0 <= j - s < n:
                    acc += np.exp(-1j * g.p[l] * (g.x[j] - 0.5 * u[t]) / hbar) * K[j, j - s]
            chord[t, l] = acc * g.dx
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for t in range(2 * n):
                for l in range(n):
                    acc += np.exp(-1j * (g.p[k] * u[t] - g.x[j] * g.p[l]) / hbar) * chord[t, l]
            out[j, k] = acc * g.dx * g.dp / (2.0 * np.pi * hbar)
    return PhaseFunction(g, out)


def displacement_matrix(z, grid: PhaseGrid) -> OperatorMatrix:
    """Matrix of T(z), built by displacing the delta basis."""
    n = grid.n_points
    cols = np.zeros((n, n), dtype=complex)
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0 / grid.dx
        cols[:, k] = displace(z, WaveFunction(grid, e)).samples
    return OperatorMatrix(grid, cols)


def weyl_quantize_operator_sum(a: PhaseFunction) -> OperatorMatrix:
    """Quantization as a displacement expansion:
    Op_W(a) = (2 pi hbar)^-1 sum_z a_sigma(z) T(z) dx dp.

    Independent of the kernel-formula path; O(N^4).
    """
    g = a.grid
    n = g.n_points
    asig = symplectic_fourier(a).values
    acc = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            T = displacement_matrix((g.x[j], g.p[k]), g)
            acc += asig[j, k] * T.entries
    return OperatorMatrix(g, acc * g.dx * g.dp / (2.0 * np.pi * g.hbar))


def hermite_state(k: int, grid: PhaseGrid) -> WaveFunction:
    """k-th harmonic-oscillator eigenfunction via the normalized recurrence."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    xi = grid.x / np.sqrt(grid.hbar)
    h_prev = np.zeros_like(xi)
    h = (np.pi * grid.hbar) ** -0.25 * np.exp(-0.5 * xi**2)
    for m in range(k):
        h_next = xi * np.sqrt(2.0 / (m + 1)) * h - np.sqrt(m / (m + 1.0)) * h_prev
        h_prev, h = h, h_next
    return WaveFunction(grid, h.astype(complex))
