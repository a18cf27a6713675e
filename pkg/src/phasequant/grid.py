"""Phase-space discretization and the basic value types.

Conventions used throughout the package:

- Position grid: x_j = -L + j*dx, j = 0..N-1, dx = 2L/N.
- Momentum grid: p_k = -P + k*dp with dp = 2*pi*hbar/(N*dx) and P = N*dp/2,
  so dx*dp*N = 2*pi*hbar holds exactly (conjugate grids).
- All integrals are rectangle sums: dx in position, dx*dp on phase space.
  This is spectrally exact for band-limited periodic integrands, which is
  why every identity in this package holds to near machine precision for
  states that decay below ~1e-14 at the box boundary.
- An OperatorMatrix K acts as (A psi)(x_j) = sum_k K[j,k] psi(x_k) dx, so
  composition is ``A @ B * dx`` and the operator trace is ``trace(K) * dx``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "PhaseGrid",
    "WaveFunction",
    "PhaseFunction",
    "OperatorMatrix",
    "make_grid",
    "l2_inner",
    "l2_norm",
    "normalize",
]


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform position grid with its FFT-conjugate momentum grid."""

    n_points: int
    half_width: float
    hbar: float
    dx: float = field(init=False)
    dp: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    p: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, L, hbar = self.n_points, self.half_width, self.hbar
        dx = 2.0 * L / n
        dp = 2.0 * np.pi * hbar / (n * dx)
        x = -L + dx * np.arange(n)
        p = -0.5 * n * dp + dp * np.arange(n)
        x.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dp", dp)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def p_max(self) -> float:
        """Half-width of the momentum box."""
        return 0.5 * self.n_points * self.dp

    @property
    def half_x(self) -> np.ndarray:
        """The 2N-point half-step position grid used for midpoint sampling."""
        return -self.half_width + 0.5 * self.dx * np.arange(2 * self.n_points)

    def meshgrid(self):
        """(X, P) arrays of shape (N, N), rows = x ascending, cols = p ascending."""
        return np.meshgrid(self.x, self.p, indexing="ij")


def make_grid(n_points: int, half_width: float, hbar: float = 1.0) -> PhaseGrid:
    """Build a PhaseGrid, validating the discretization parameters.

    n_points must be even and at least 8; half_width and hbar positive.
    """
    if int(n_points) != n_points or n_points < 8:
        raise ValueError(f"n_points must be an integer >= 8, got {n_points}")
    if n_points % 2 != 0:
        raise ValueError(f"n_points must be even, got {n_points}")
    if half_width <= 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    return PhaseGrid(int(n_points), float(half_width), float(hbar))


def _require_same_grid(a, b):
    if a.grid is not b.grid and (
        a.grid.n_points != b.grid.n_points
        or a.grid.half_width != b.grid.half_width
        or a.grid.hbar != b.grid.hbar
    ):
        raise ValueError("grid mismatch between operands")


@dataclass(frozen=True)
class WaveFunction:
    """Complex samples of a state on the position grid.

    ``generator``, when present, evaluates the state analytically at
    arbitrary positions; it is used for exact half-step sampling and is
    composed through operations that permit it (scaling, displacement).
    """

    grid: PhaseGrid
    samples: np.ndarray
    generator: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_points,):
            raise ValueError(
                f"samples shape {samples.shape} does not match grid size {self.grid.n_points}"
            )
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.dx))

    def half_samples(self) -> np.ndarray:
        """Samples on the 2N half-step grid (generator if present, else
        trigonometric interpolation)."""
        if self.generator is not None:
            return np.asarray(self.generator(self.grid.half_x), dtype=complex)
        from .transforms import upsample2

        return upsample2(self.samples)

    def scaled(self, c: complex) -> "WaveFunction":
        gen = self.generator
        new_gen = None if gen is None else (lambda xs, g=gen, c=c: c * np.asarray(g(xs)))
        return WaveFunction(self.grid, c * self.samples, new_gen)


@dataclass(frozen=True)
class PhaseFunction:
    """Samples of a function on the N x N phase grid, indexed (x_j, p_k)."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        values = np.ascontiguousarray(self.values)
        if values.shape != (n, n):
            raise ValueError(f"values shape {values.shape} does not match grid ({n}, {n})")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def integral(self) -> complex:
        """Rectangle-rule integral with weight dx*dp."""
        return complex(np.sum(self.values) * self.grid.dx * self.grid.dp)


@dataclass(frozen=True)
class OperatorMatrix:
    """Discretized kernel operator: (A psi)(x_j) = sum_k K[j,k] psi(x_k) dx."""

    grid: PhaseGrid
    entries: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.grid.n_points
        entries = np.ascontiguousarray(self.entries, dtype=complex)
        if entries.shape != (n, n):
            raise ValueError(f"entries shape {entries.shape} does not match grid ({n}, {n})")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    def apply(self, psi: WaveFunction) -> WaveFunction:
        _require_same_grid(self, psi)
        return WaveFunction(self.grid, self.entries @ psi.samples * self.grid.dx)

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _require_same_grid(self, other)
        return OperatorMatrix(self.grid, self.entries @ other.entries * self.grid.dx)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries) * self.grid.dx)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _require_same_grid(self, other)
        return OperatorMatrix(self.grid, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _require_same_grid(self, other)
        return OperatorMatrix(self.grid, self.entries - other.entries)

    def __mul__(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, c * self.entries)

    __rmul__ = __mul__


def l2_inner(psi: WaveFunction, chi: WaveFunction) -> complex:
    """L2 inner product (psi|chi) = sum psi(x) chi*(x) dx.

    Conjugate-linear in the second argument.
    """
    _require_same_grid(psi, chi)
    return complex(np.sum(psi.samples * chi.samples.conj()) * psi.grid.dx)


def l2_norm(psi: WaveFunction) -> float:
    return psi.norm()


def normalize(psi: WaveFunction) -> WaveFunction:
    """Rescale to unit L2 norm.  Raises on (numerically) zero input."""
    n = psi.norm()
    if n < 1e-300 or not np.isfinite(n):
        raise ValueError("cannot normalize a zero (or non-finite) state")
    return psi.scaled(1.0 / n)
