"""Acceptance battery: one callable per criterion, shared by the test
suite and the ``pq selftest`` command.

Default fixture: N = 128, L = 8, hbar = 1; the path-equivalence check runs
at N = 64 and the oracle-equivalence checks at N = 8 as stated in their
criteria.  Each criterion returns a CriterionResult with the measured
numbers in ``detail`` so a failure is diagnosable from the printed line.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import oracles
from .grid import PhaseFunction, l2_inner, make_grid
from .metaplectic import (
    Chirp,
    Dilate,
    Fourier,
    toeplitz_covariance_residual,
    weyl_covariance_residual,
    wigner_covariance_residual,
)
from .modspace import m1_norm, m1inf_norm, m1_norm_phase
from .statecheck import validate_density, wigner_of_density
from .toeplitz import (
    LatticeMixture,
    _convolve_phase,
    density_from_measure,
    gaussian_density,
    lattice_mixed_state,
    toeplitz_conv,
    toeplitz_direct,
)
from .transforms import cross_wigner, standard_window, symplectic_fourier
from .weyl import projector, weyl_quantize, weyl_symbol

__all__ = ["CriterionResult", "run_all", "CRITERIA"]


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    description: str
    passed: bool
    detail: str


def _default_grid():
    return make_grid(128, 8.0, 1.0)


def _gaussian_symbol(grid, sx=1.0, sp=1.0, center=(0.0, 0.0)):
    X, P = grid.meshgrid()
    x0, p0 = center
    return PhaseFunction(
        grid, np.exp(-((X - x0) ** 2) / (2 * sx) - ((P - p0) ** 2) / (2 * sp)).astype(complex)
    )


def criterion_1_gaussian_wigner():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    W = cross_wigner(phi0, phi0)
    X, P = g.meshgrid()
    exact = np.pi**-1 * np.exp(-(X**2 + P**2))
    mask = X**2 + P**2 <= 16.0
    err = float(np.max(np.abs(W.values.real - exact)[mask]))
    return CriterionResult(
        "C1", "Gaussian Wigner closed form on |z| <= 4", err <= 1e-10, f"max err {err:.3e} (tol 1e-10)"
    )


def criterion_2_projector_symbol():
    g = _default_grid()
    errs = {}
    for name, tol in (("gaussian", 1e-8), ("hermite1", 1e-7)):
        phi = standard_window(name, g)
        sym = weyl_symbol(projector(phi))
        W = cross_wigner(phi, phi)
        errs[name] = (
            float(np.max(np.abs(sym.values - 2 * np.pi * g.hbar * W.values))),
            tol,
        )
    passed = all(e <= tol for e, tol in errs.values())
    detail = ", ".join(f"{k}: {e:.3e} (tol {tol:g})" for k, (e, tol) in errs.items())
    return CriterionResult("C2", "projector symbol equals (2 pi hbar) x Wigner", passed, detail)


def criterion_3_wigner_mass():
    g = _default_grid()
    states = {
        "gaussian": standard_window("gaussian", g),
        "hermite1": standard_window("hermite1", g),
        "displaced": standard_window("displaced_gaussian", g, center=(1.0, 0.5)),
    }
    worst = 0.0
    for psi in states.values():
        for phi in states.values():
            gap = abs(cross_wigner(psi, phi).integral() - l2_inner(psi, phi))
            worst = max(worst, gap)
    return CriterionResult(
        "C3", "cross-Wigner integral equals the inner product", worst <= 1e-8,
        f"worst pair gap {worst:.3e} (tol 1e-8)"
    )


def criterion_4_path_equivalence():
    g = make_grid(64, 8.0, 1.0)
    symbols = {
        "centered": _gaussian_symbol(g, sx=0.6, sp=1.5),
        "shifted": _gaussian_symbol(g, sx=0.6, sp=1.5, center=(1.0, 0.5)),
    }
    windows = {
        "gaussian": standard_window("gaussian", g),
        "hermite1": standard_window("hermite1", g),
    }
    worst = 0.0
    for a in symbols.values():
        for phi in windows.values():
            direct = toeplitz_direct(a, phi)
            conv = toeplitz_conv(a, phi)
            rel = float(np.linalg.norm(direct.entries - conv.entries)
                        / np.linalg.norm(conv.entries))
            worst = max(worst, rel)
    return CriterionResult(
        "C4", "Toeplitz path equivalence at N = 64", worst <= 1e-6,
        f"worst relative Frobenius {worst:.3e} (tol 1e-6)"
    )


def criterion_5_thermal_density():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    rho, _ = density_from_measure(gaussian_density(g, 1.0), phi0, path="conv")
    report = validate_density(rho)
    trace_gap = abs(rho.meta["raw_trace"] - 1.0)
    ev = report.eigenvalues
    ev_gap = max(abs(float(ev[k]) - 2.0 ** -(k + 1)) for k in range(7))
    purity_gap = abs(report.purity - 1.0 / 3.0)
    passed = (trace_gap <= 1e-6 and report.min_eigenvalue >= -1e-8
              and ev_gap <= 1e-4 and purity_gap <= 1e-4)
    detail = (f"|trace-1| {trace_gap:.2e}, min eig {report.min_eigenvalue:.2e}, "
              f"eig gap {ev_gap:.2e}, |purity-1/3| {purity_gap:.2e}")
    return CriterionResult("C5", "thermal density operator from a Gaussian measure", passed, detail)


def criterion_6_lattice_mixture():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    mix = LatticeMixture([(1.0, 0.0), (-1.0, 0.0)], [0.5, 0.5])
    rho, _ = lattice_mixed_state(mix, phi0)
    report = validate_density(rho)
    purity_gap = abs(report.purity - 0.5 * (1.0 + np.exp(-2.0)))
    X, P = g.meshgrid()
    gabor = 0.5 / np.pi * (np.exp(-((X - 1) ** 2 + P**2)) + np.exp(-((X + 1) ** 2 + P**2)))
    wig_gap = float(np.max(np.abs(wigner_of_density(rho).values - gabor)))
    passed = purity_gap <= 1e-6 and wig_gap <= 1e-8
    return CriterionResult(
        "C6", "two-atom lattice mixture purity and Wigner sum", passed,
        f"purity gap {purity_gap:.2e} (tol 1e-6), Wigner gap {wig_gap:.2e} (tol 1e-8)"
    )


def criterion_7_symplectic_covariance():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    a = _gaussian_symbol(g, sx=0.6, sp=1.5)
    words = {
        "[fourier]": [Fourier()],
        "[chirp(0.5)]": [Chirp(0.5)],
        "[dilate(1.5)]": [Dilate(1.5)],
        "[fourier,chirp(0.7)]": [Fourier(), Chirp(0.7)],
    }
    worst = {"weyl": 0.0, "toeplitz": 0.0, "wigner": 0.0}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for word in words.values():
            worst["weyl"] = max(worst["weyl"], weyl_covariance_residual(a, word))
            worst["toeplitz"] = max(worst["toeplitz"],
                                    toeplitz_covariance_residual(a, phi0, word))
            worst["wigner"] = max(worst["wigner"], wigner_covariance_residual(phi0, word))
    passed = all(v <= 1e-6 for v in worst.values())
    detail = ", ".join(f"{k} {v:.3e}" for k, v in worst.items()) + " (tol 1e-6)"
    return CriterionResult("C7", "symplectic covariance residuals over the word set", passed, detail)


def criterion_8_modulation_norms():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    m1 = m1_norm(phi0, phi0)
    m1_gap = abs(m1.value - 1.0)
    mu = gaussian_density(g, 1.0)
    W = cross_wigner(phi0, phi0)
    W = PhaseFunction(g, W.values.real)
    conv = _convolve_phase(mu.mu, W)
    conv = PhaseFunction(g, conv.values.real)
    targets = {"mu": mu.mu, "Wphi0": W, "mu*Wphi0": conv}
    details = [f"|m1(phi0)-1| {m1_gap:.2e}"]
    stable = m1_gap <= 1e-6
    for name, target in targets.items():
        lo = m1inf_norm(target, 1.0, 24).value
        hi = m1inf_norm(target, 1.0, 32).value
        rel = abs(hi - lo) / lo
        ok = np.isfinite(lo) and np.isfinite(hi) and rel <= 0.2
        stable = stable and ok
        details.append(f"m1inf({name}) {lo:.4f}/{hi:.4f} rel {rel:.2%}")
    for name, target in (("Wphi0", W), ("mu*Wphi0", conv)):
        lo = m1_norm_phase(target, 1.0, 24).value
        hi = m1_norm_phase(target, 1.0, 32).value
        rel = abs(hi - lo) / lo
        ok = np.isfinite(lo) and np.isfinite(hi) and rel <= 0.2
        stable = stable and ok
        details.append(f"m1({name}) {lo:.4f}/{hi:.4f} rel {rel:.2%}")
    return CriterionResult("C8", "modulation-norm diagnostics finite and refinement-stable",
                           bool(stable), "; ".join(details))


def criterion_9_oracle_equivalence():
    g = make_grid(8, 4.0, 1.0)
    phi0 = standard_window("gaussian", g)
    h1 = standard_window("hermite1", g)
    a = _gaussian_symbol(g)
    gaps = {
        "cross_wigner": float(np.max(np.abs(
            cross_wigner(h1, phi0).values - oracles.cross_wigner_direct(h1, phi0).values))),
        "weyl_quantize": float(np.max(np.abs(
            weyl_quantize(a).entries - oracles.weyl_quantize_direct(a).entries))),
        "symplectic_fourier": float(np.max(np.abs(
            symplectic_fourier(a).values - oracles.symplectic_fourier_direct(a).values))),
    }
    passed = all(v <= 1e-10 for v in gaps.values())
    detail = ", ".join(f"{k} {v:.3e}" for k, v in gaps.items()) + " (tol 1e-10)"
    return CriterionResult("C9", "FFT paths match direct quadrature oracles at N = 8", passed, detail)


def criterion_10_conv_speedup():
    g = _default_grid()
    phi0 = standard_window("gaussian", g)
    a = _gaussian_symbol(g)
    toeplitz_conv(a, phi0)                      # warm caches before timing
    t0 = time.perf_counter()
    toeplitz_direct(a, phi0, thin=1)
    t_direct = time.perf_counter() - t0
    t0 = time.perf_counter()
    toeplitz_conv(a, phi0)
    t_conv = time.perf_counter() - t0
    passed = t_conv <= 0.5 * t_direct
    return CriterionResult(
        "C10", "convolution path at least 2x faster than direct at N = 128", passed,
        f"direct {t_direct:.3f}s, conv {t_conv:.3f}s, ratio {t_conv / t_direct:.3f} (gate 0.5)"
    )


CRITERIA = [
    criterion_1_gaussian_wigner,
    criterion_2_projector_symbol,
    criterion_3_wigner_mass,
    criterion_4_path_equivalence,
    criterion_5_thermal_density,
    criterion_6_lattice_mixture,
    criterion_7_symplectic_covariance,
    criterion_8_modulation_norms,
    criterion_9_oracle_equivalence,
    criterion_10_conv_speedup,
]


def run_all(printer=None) -> list:
    """Run every criterion, optionally printing one pass/fail line each."""
    results = []
    for crit in CRITERIA:
        res = crit()
        results.append(res)
        if printer is not None:
            status = "PASS" if res.passed else "FAIL"
            printer(f"[{status}] {res.cid}: {res.description} -- {res.detail}")
    return results
