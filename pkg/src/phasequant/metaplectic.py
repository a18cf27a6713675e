"""Metaplectic operators as words in {fourier, chirp, dilate} and the
symplectic covariance checks for Weyl and Toeplitz quantization.

Words apply right to left, like operator composition: ``[g1, g2]`` means
apply g2 first.  The metaplectic sign/phase of the double cover is never
needed here because every covariance residual conjugates by the word, which
cancels global phases.

The symplectic projection of the Fourier generator is the quarter-turn

    FOURIER_SYMPLECTIC = [[0, 1], [-1, 0]],

i.e. F T(x, p) F^-1 = T(p, -x) for the hbar-scaled transform
(F psi)(x) = (2 pi hbar)^(-1/2) int exp(-i x y/hbar) psi(y) dy.  The sign is
pinned empirically by the Wigner-covariance calibration test kept in the
suite (test_metaplectic.py): the opposite sign makes the residual O(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union
import warnings

import numpy as np

from .grid import OperatorMatrix, PhaseFunction, PhaseGrid, WaveFunction
from .toeplitz import toeplitz_conv
from .transforms import cross_wigner, phase_interpolator, wigner_interpolator
from .weyl import weyl_quantize

__all__ = [
    "Fourier",
    "Chirp",
    "Dilate",
    "FOURIER_SYMPLECTIC",
    "metaplectic_apply",
    "word_symplectic",
    "inverse_word",
    "word_matrix",
    "compose_symbol",
    "weyl_covariance_residual",
    "toeplitz_covariance_residual",
    "wigner_covariance_residual",
]

FOURIER_SYMPLECTIC = np.array([[0.0, 1.0], [-1.0, 0.0]])
FOURIER_SYMPLECTIC.flags.writeable = False


@dataclass(frozen=True)
class Fourier:
    """hbar-scaled unitary Fourier transform."""


@dataclass(frozen=True)
class Chirp:
    """Multiplication by exp(i c x^2 / (2 hbar))."""

    c: float


@dataclass(frozen=True)
class Dilate:
    """psi(x) -> lam^(-1/2) psi(x / lam), lam > 0."""

    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("dilation parameter must be positive")


Generator = Union[Fourier, Chirp, Dilate]
MetaplecticWord = Sequence[Generator]


def _apply_fourier(psi: WaveFunction) -> WaveFunction:
    """Continuum Fourier transform sampled back on the position grid.

    The output grid is the position grid, not the conjugate momentum grid,
    so this is a chirp-z (Bluestein) sum rather than a plain FFT.
    """
    from scipy.signal import czt

    g = psi.grid
    hbar = g.hbar
    x0 = g.x[0]
    # sum_j psi_j e^{-i x_k x_j / hbar} dx  =  e^{-i x0 x_k/hbar} czt(...)
    w = np.exp(-1j * g.dx * g.dx / hbar)
    pre = np.exp(-1j * x0 * g.dx * np.arange(g.n_points) / hbar)
    out = czt(psi.samples * pre, m=g.n_points, w=w, a=1.0)
    out *= np.exp(-1j * x0 * g.x / hbar)
    return WaveFunction(g, out * g.dx / np.sqrt(2.0 * np.pi * hbar))


def _trig_eval(psi: WaveFunction, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolant of the samples at arbitrary points,
    zero outside the box (same Nyquist-split convention as upsample2)."""
    g = psi.grid
    n = g.n_points
    F = np.fft.fft(psi.samples)
    freqs = np.fft.fftfreq(n, d=1.0 / n)  # integer frequencies
    coeff = F / n
    theta = np.pi * (np.asarray(points, dtype=float)[:, None] + g.half_width) / g.half_width
    mat = np.exp(1j * theta * freqs[None, :])
    # split the Nyquist bin: e^{+-i (n/2) theta} averaged -> cos
    nyq = np.where(freqs == -n // 2)[0][0]
    mat[:, nyq] = np.cos(0.5 * n * theta[:, 0])
    vals = mat @ coeff
    inside = (np.abs(np.asarray(points, dtype=float)) < g.half_width)
    return np.where(inside, vals, 0.0)


def _apply_dilate(psi: WaveFunction, lam: float) -> WaveFunction:
    g = psi.grid
    if psi.generator is not None:
        gen0 = psi.generator
        vals = lam**-0.5 * np.asarray(gen0(g.x / lam), dtype=complex)
        new_gen = (lambda xs, g0=gen0, lam=lam:
                   lam**-0.5 * np.asarray(g0(np.asarray(xs) / lam)))
    else:
        vals = lam**-0.5 * _trig_eval(psi, g.x / lam)
        new_gen = None
    out = WaveFunction(g, vals, new_gen)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    edge = max(abs(vals[0]), abs(vals[-1]))
    if edge > 1e-10 * scale:
        warnings.warn("dilation pushed support toward the periodic box boundary",
                      stacklevel=3)
    return out


def metaplectic_apply(word: MetaplecticWord, psi: WaveFunction) -> WaveFunction:
    """Apply a metaplectic word (right to left) to a state.

    Chirp and dilate compose the analytic generator when present; the
    Fourier step drops it (no closed form in general).
    """
    out = psi
    for gen in reversed(list(word)):
        if isinstance(gen, Fourier):
            out = _apply_fourier(out)
        elif isinstance(gen, Chirp):
            g = out.grid
            phase = np.exp(0.5j * gen.c * g.x**2 / g.hbar)
            gen0 = out.generator
            new_gen = None
            if gen0 is not None:
                def new_gen(xs, g0=gen0, c=gen.c, hbar=g.hbar):
                    xs = np.asarray(xs)
                    return np.exp(0.5j * c * xs**2 / hbar) * np.asarray(g0(xs))
            out = WaveFunction(g, phase * out.samples, new_gen)
        elif isinstance(gen, Dilate):
            out = _apply_dilate(out, gen.lam)
        else:
            raise TypeError(f"unknown generator {gen!r}")
    return out


def _generator_symplectic(gen: Generator) -> np.ndarray:
    if isinstance(gen, Fourier):
        return FOURIER_SYMPLECTIC.copy()
    if isinstance(gen, Chirp):
        return np.array([[1.0, 0.0], [gen.c, 1.0]])
    if isinstance(gen, Dilate):
        return np.array([[gen.lam, 0.0], [0.0, 1.0 / gen.lam]])
    raise TypeError(f"unknown generator {gen!r}")


def word_symplectic(word: MetaplecticWord) -> np.ndarray:
    """Symplectic projection of a word (product in operator order)."""
    S = np.eye(2)
    for gen in word:
        S = S @ _generator_symplectic(gen)
    return S


def inverse_word(word: MetaplecticWord) -> list:
    """Reversed word of inverse generators (F^-1 realized as F^3)."""
    inv: list = []
    for gen in reversed(list(word)):
        if isinstance(gen, Fourier):
            inv.extend([Fourier(), Fourier(), Fourier()])
        elif isinstance(gen, Chirp):
            inv.append(Chirp(-gen.c))
        elif isinstance(gen, Dilate):
            inv.append(Dilate(1.0 / gen.lam))
        else:
            raise TypeError(f"unknown generator {gen!r}")
    return inv


def word_matrix(word: MetaplecticWord, grid: PhaseGrid) -> OperatorMatrix:
    """Operator matrix of a word, built column-by-column from delta states."""
    n = grid.n_points
    cols = np.zeros((n, n), dtype=complex)
    with warnings.catch_warnings():
        # delta basis columns always ring at the box edge; the boundary
        # warning is meaningful only for physical states
        warnings.simplefilter("ignore")
        for k in range(n):
            e = np.zeros(n, dtype=complex)
            e[k] = 1.0 / grid.dx
            cols[:, k] = metaplectic_apply(word, WaveFunction(grid, e)).samples
    return OperatorMatrix(grid, cols)


def compose_symbol(a: PhaseFunction, S: np.ndarray) -> PhaseFunction:
    """Samples of a(S^-1 z) on the phase grid (spectral + cubic lookup,
    zero outside the box)."""
    g = a.grid
    Sinv = np.linalg.inv(S)
    X, P = g.meshgrid()
    xs = Sinv[0, 0] * X + Sinv[0, 1] * P
    ps = Sinv[1, 0] * X + Sinv[1, 1] * P
    interp = phase_interpolator(a)
    return PhaseFunction(g, interp(xs, ps))


def _rel_frobenius(A: OperatorMatrix, B: OperatorMatrix) -> float:
    denom = max(B.frobenius(), 1e-300)
    return float(np.linalg.norm(A.entries - B.entries) / denom)


def weyl_covariance_residual(a: PhaseFunction, word: MetaplecticWord) -> float:
    """Relative Frobenius distance between Op_W(a o S^-1) and S Op_W(a) S^-1."""
    g = a.grid
    S = word_symplectic(word)
    lhs = weyl_quantize(compose_symbol(a, S))
    M = word_matrix(word, g)
    Minv = word_matrix(inverse_word(word), g)
    rhs = M.compose(weyl_quantize(a)).compose(Minv)
    return _rel_frobenius(lhs, rhs)


def wigner_covariance_residual(psi: WaveFunction, word: MetaplecticWord) -> float:
    """Sup-norm residual of W(S psi) - W(psi) o S^-1, relative to max |W(psi)|.

    The right side is evaluated from the exact doubled-lattice Wigner
    samples, so the residual probes the transform itself rather than
    resampling error.
    """
    g = psi.grid
    S = word_symplectic(word)
    Sinv = np.linalg.inv(S)
    moved = metaplectic_apply(word, psi)
    lhs = cross_wigner(moved, moved).values
    interp = wigner_interpolator(psi, psi)
    X, P = g.meshgrid()
    rhs = interp(Sinv[0, 0] * X + Sinv[0, 1] * P, Sinv[1, 0] * X + Sinv[1, 1] * P)
    W = cross_wigner(psi, psi).values
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(W)))


def toeplitz_covariance_residual(a: PhaseFunction, phi: WaveFunction,
                                 word: MetaplecticWord) -> float:
    """Relative Frobenius distance between Op_phi(a o S^-1) and
    S Op_{S^-1 phi}(a) S^-1."""
    g = a.grid
    S = word_symplectic(word)
    lhs = toeplitz_conv(compose_symbol(a, S), phi)
    inv = inverse_word(word)
    phi_back = metaplectic_apply(inv, phi)
    M = word_matrix(word, g)
    Minv = word_matrix(inv, g)
    rhs = M.compose(toeplitz_conv(a, phi_back)).compose(Minv)
    return _rel_frobenius(lhs, rhs)
