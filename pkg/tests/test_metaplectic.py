import warnings

import numpy as np
import pytest

from phasequant import (
    Chirp,
    Dilate,
    Fourier,
    FOURIER_SYMPLECTIC,
    cross_wigner,
    inverse_word,
    metaplectic_apply,
    standard_window,
    toeplitz_covariance_residual,
    weyl_covariance_residual,
    word_matrix,
    word_symplectic,
)
from phasequant.grid import PhaseFunction
from phasequant.metaplectic import wigner_covariance_residual

from conftest import random_state

# box-edge rings from deliberately stretched states are exercised explicitly
# in test_dilate_warning_when_support_escapes; elsewhere they are expected noise
pytestmark = pytest.mark.filterwarnings("ignore:dilation pushed")

WORDS = {
    "fourier": [Fourier()],
    "chirp": [Chirp(0.5)],
    "dilate": [Dilate(1.5)],
    "fourier_chirp": [Fourier(), Chirp(0.7)],
}


def gaussian_symbol(grid, sx=0.6, sp=1.5):
    X, P = grid.meshgrid()
    return PhaseFunction(grid, np.exp(-X**2 / (2 * sx) - P**2 / (2 * sp)).astype(complex))


class TestApply:
    def test_empty_word_is_identity(self, grid, hermite1):
        out = metaplectic_apply([], hermite1)
        assert np.array_equal(out.samples, hermite1.samples)

    def test_fourier_fixes_gaussian(self, grid, phi0):
        out = metaplectic_apply([Fourier()], phi0)
        assert np.max(np.abs(out.samples - phi0.samples)) < 1e-9

    def test_fourier_fourth_power_is_identity(self, grid, hermite1):
        out = metaplectic_apply([Fourier()] * 4, hermite1)
        assert np.max(np.abs(out.samples - hermite1.samples)) < 1e-9

    @pytest.mark.parametrize("word", list(WORDS.values()), ids=list(WORDS))
    def test_norm_preserved(self, grid, word):
        if any(isinstance(gen, Dilate) for gen in word):
            # a 1.5x stretch of the broad random state leaves the box, which
            # genuinely loses mass; check unitarity on an in-box dilation
            psi = random_state(grid, seed=31, band=4)
            word = [Dilate(1.25)]
        else:
            psi = random_state(grid, seed=31)
        out = metaplectic_apply(word, psi)
        assert abs(out.norm() - psi.norm()) < 1e-9

    def test_dilate_warning_when_support_escapes(self, grid, phi0):
        wide = standard_window("displaced_gaussian", grid, center=(3.0, 0.0))
        with pytest.warns(UserWarning):
            metaplectic_apply([Dilate(2.5)], wide)

    def test_chirp_wigner_shear(self, grid, displaced):
        word = [Chirp(0.7)]
        assert wigner_covariance_residual(displaced, word) < 1e-6


class TestWordSymplectic:
    def test_empty_word(self):
        assert np.array_equal(word_symplectic([]), np.eye(2))

    def test_generator_matrices(self):
        assert np.allclose(word_symplectic([Chirp(0.7)]), [[1, 0], [0.7, 1]])
        S = word_symplectic([Dilate(2.0)])
        assert np.allclose(S, [[2, 0], [0, 0.5]])
        assert np.linalg.det(S) == pytest.approx(1.0, abs=1e-12)

    def test_homomorphism(self):
        w1 = [Fourier(), Chirp(0.3)]
        w2 = [Dilate(1.2), Chirp(-0.4)]
        assert np.allclose(word_symplectic(list(w1) + list(w2)),
                           word_symplectic(w1) @ word_symplectic(w2))

    def test_fourier_sign_calibration(self, grid, displaced):
        # the recorded quarter-turn minimizes the Wigner covariance residual;
        # the opposite sign is catastrophically wrong on an asymmetric state
        word = [Fourier()]
        good = wigner_covariance_residual(displaced, word)
        assert good < 1e-6

        S_wrong = -FOURIER_SYMPLECTIC
        moved = metaplectic_apply(word, displaced)
        lhs = cross_wigner(moved, moved).values
        from phasequant.transforms import wigner_interpolator

        interp = wigner_interpolator(displaced, displaced)
        X, P = grid.meshgrid()
        Sinv = np.linalg.inv(S_wrong)
        rhs = interp(Sinv[0, 0] * X + Sinv[0, 1] * P, Sinv[1, 0] * X + Sinv[1, 1] * P)
        W = cross_wigner(displaced, displaced).values
        bad = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(W)))
        assert bad > 1e-1


class TestInverseWord:
    @pytest.mark.parametrize("word", list(WORDS.values()), ids=list(WORDS))
    def test_word_times_inverse_fixes_states(self, grid, word):
        psi = standard_window("gaussian", grid)
        back = metaplectic_apply(list(word) + inverse_word(word), psi)
        assert np.max(np.abs(back.samples - psi.samples)) < 1e-9

    def test_symplectic_inverse(self):
        for word in WORDS.values():
            S = word_symplectic(word)
            Sinv = word_symplectic(inverse_word(word))
            assert np.allclose(S @ Sinv, np.eye(2), atol=1e-12)


class TestCovarianceResiduals:
    @pytest.mark.parametrize("word", list(WORDS.values()), ids=list(WORDS))
    def test_weyl(self, grid, word):
        a = gaussian_symbol(grid)
        assert weyl_covariance_residual(a, word) < 1e-6

    @pytest.mark.parametrize("word", list(WORDS.values()), ids=list(WORDS))
    def test_toeplitz(self, grid, phi0, word):
        a = gaussian_symbol(grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # composed symbols may touch the boundary
            assert toeplitz_covariance_residual(a, phi0, word) < 1e-6

    def test_toeplitz_hermite_window(self, grid, hermite1):
        a = gaussian_symbol(grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r = toeplitz_covariance_residual(a, hermite1, [Chirp(0.5), Dilate(1.5)])
        assert r < 1e-5

    def test_empty_word_residuals_vanish(self, grid, phi0):
        a = gaussian_symbol(grid)
        assert weyl_covariance_residual(a, []) < 1e-12
        assert toeplitz_covariance_residual(a, phi0, []) < 1e-12

    def test_zmixed_symbol_chirp(self, grid):
        # symbol with an odd factor, per the shear example
        X, P = grid.meshgrid()
        a = PhaseFunction(grid, (X * np.exp(-(X**2 + P**2) / 2)).astype(complex))
        assert weyl_covariance_residual(a, [Chirp(0.5)]) < 1e-6


class TestWignerCovariance:
    STATES = ["gaussian", "hermite1", "displaced"]

    @pytest.mark.parametrize("word", list(WORDS.values()), ids=list(WORDS))
    @pytest.mark.parametrize("state", STATES)
    def test_invariant(self, grid, word, state, request):
        if any(isinstance(gen, Dilate) for gen in word) and state != "gaussian":
            # dilate(1.5) pushes the wider test states past the box-decay
            # contract; an in-box dilation is checked below instead
            pytest.skip("state support leaves the box under this dilation")
        psi = request.getfixturevalue({"gaussian": "phi0", "hermite1": "hermite1",
                                       "displaced": "displaced"}[state])
        assert wigner_covariance_residual(psi, word) < 1e-6

    def test_inbox_dilation_hermite(self, grid, hermite1):
        assert wigner_covariance_residual(hermite1, [Dilate(1.25)]) < 1e-6

    def test_length_three_words(self, grid, phi0, hermite1):
        words = [
            [Chirp(0.3), Fourier(), Dilate(1.25)],
            [Fourier(), Chirp(0.4), Fourier()],
            [Dilate(1.2), Chirp(-0.5), Fourier()],
        ]
        for word in words:
            for psi in (phi0, hermite1):
                assert wigner_covariance_residual(psi, word) < 1e-6

    def test_displacement_conjugation(self, grid, phi0):
        # S T(z) S^-1 = T(Sz) compared through phase-invariant Wigner data
        from phasequant import displace

        word = [Chirp(0.6)]
        S = word_symplectic(word)
        z = (1.0, 0.5)
        lhs_state = metaplectic_apply(
            word, displace(z, metaplectic_apply(inverse_word(word), phi0)))
        rhs_state = displace(tuple(S @ np.asarray(z)), phi0)
        Wl = cross_wigner(lhs_state, lhs_state).values
        Wr = cross_wigner(rhs_state, rhs_state).values
        assert np.max(np.abs(Wl - Wr)) < 1e-8


class TestWordMatrix:
    def test_empty_word_matrix_is_identity(self, grid):
        M = word_matrix([], grid)
        assert np.max(np.abs(M.entries - np.eye(grid.n_points) / grid.dx)) < 1e-12

    def test_matrix_matches_apply(self, grid, hermite1):
        word = [Fourier(), Chirp(0.4)]
        M = word_matrix(word, grid)
        direct = metaplectic_apply(word, hermite1)
        assert np.max(np.abs(M.apply(hermite1).samples - direct.samples)) < 1e-9
