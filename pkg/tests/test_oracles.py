"""FFT implementations against explicit-loop quadrature oracles.

Everything here runs on the 8-point grid (L = 4) where the loop oracles are
cheap.  The FFT-vs-loop agreements are pure bookkeeping checks and hold to
machine precision; the displacement-expansion quantizer is a genuinely
independent second discretization and matches tightly only once the grid
resolves the kernel (checked at N = 32).
"""

import numpy as np
import pytest

from phasequant import (
    cross_ambiguity,
    cross_wigner,
    normalize,
    standard_window,
    symplectic_fourier,
    weyl_quantize,
    weyl_symbol,
)
from phasequant.grid import PhaseFunction
from phasequant.oracles import (
    cross_ambiguity_direct,
    cross_wigner_direct,
    hermite_state,
    symplectic_fourier_direct,
    weyl_quantize_direct,
    weyl_quantize_operator_sum,
    weyl_symbol_direct,
)


@pytest.fixture(scope="module")
def sym8(grid8):
    X, P = grid8.meshgrid()
    return PhaseFunction(grid8, np.exp(-(X**2 + P**2) / 2).astype(complex))


@pytest.fixture(scope="module")
def states8(grid8):
    return (normalize(standard_window("gaussian", grid8)),
            normalize(standard_window("hermite1", grid8)))


def test_cross_wigner_oracle(grid8, states8):
    phi, h1 = states8
    for psi, chi in [(phi, phi), (h1, phi), (phi, h1)]:
        gap = np.max(np.abs(cross_wigner(psi, chi).values
                            - cross_wigner_direct(psi, chi).values))
        assert gap < 1e-10


def test_cross_ambiguity_oracle(grid8, states8):
    phi, h1 = states8
    gap = np.max(np.abs(cross_ambiguity(h1, phi).values
                        - cross_ambiguity_direct(h1, phi).values))
    assert gap < 1e-10


def test_symplectic_fourier_oracle(grid8, sym8):
    gap = np.max(np.abs(symplectic_fourier(sym8).values
                        - symplectic_fourier_direct(sym8).values))
    assert gap < 1e-10


def test_weyl_quantize_oracle(grid8, sym8):
    gap = np.max(np.abs(weyl_quantize(sym8).entries
                        - weyl_quantize_direct(sym8).entries))
    assert gap < 1e-10


def test_weyl_symbol_oracle(grid8, states8):
    phi, _ = states8
    from phasequant import projector

    A = projector(phi)
    gap = np.max(np.abs(weyl_symbol(A).values - weyl_symbol_direct(A).values))
    assert gap < 1e-10


def test_operator_sum_quantizer_coarse(grid8, sym8):
    # the displacement expansion periodizes the kernel over the torus while
    # the kernel formula band-limits it; on the tiny grid the two
    # discretizations differ at the percent level
    K_kernel = weyl_quantize(sym8)
    K_sum = weyl_quantize_operator_sum(sym8)
    rel = (np.linalg.norm(K_kernel.entries - K_sum.entries)
           / np.linalg.norm(K_kernel.entries))
    assert rel < 2e-2


def test_operator_sum_quantizer_resolved():
    from phasequant import make_grid

    g = make_grid(32, 8.0, 1.0)
    X, P = g.meshgrid()
    a = PhaseFunction(g, np.exp(-(X**2 + P**2) / 2).astype(complex))
    K_kernel = weyl_quantize(a)
    K_sum = weyl_quantize_operator_sum(a)
    rel = (np.linalg.norm(K_kernel.entries - K_sum.entries)
           / np.linalg.norm(K_kernel.entries))
    assert rel < 1e-6


def test_hermite_states_orthonormal(grid):
    states = [hermite_state(k, grid) for k in range(8)]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            want = 1.0 if i == j else 0.0
            got = np.sum(a.samples * b.samples.conj()) * grid.dx
            assert abs(got - want) < 1e-10


def test_hermite_one_matches_window(grid, hermite1):
    h = hermite_state(1, grid)
    assert np.max(np.abs(h.samples - hermite1.samples)) < 1e-12
