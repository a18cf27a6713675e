"""Config-driven experiment runner (``pq``).

Subcommands:

- ``pq run config.toml``      execute the tasks in the config
- ``pq validate config.toml`` parse and validate only
- ``pq selftest``             run the acceptance battery

Configs are TOML: a ``[grid]`` table, named ``[windows.*]`` tables, and an
ordered ``[[tasks]]`` array.  Each task writes ``<name>_report.json`` plus
plot-ready CSV files (17-significant-digit scientific notation, so repeated
runs produce byte-identical numeric bodies).  A ``manifest.json`` records
parameters, versions and timings.  ``--threads`` (or ``PQ_THREADS``) caps
BLAS/OpenMP parallelism; it must act before the numeric stack loads, which
is why the heavy imports in this module live inside functions.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path

TASK_TYPES = ("wigner", "quantize", "toeplitz", "density", "lattice",
              "covariance", "norms", "bench")

_WORD_RE = re.compile(r"^(fourier|chirp|dilate)(?:\(([-+0-9.eE]+)\))?$")


class ConfigError(Exception):
    """Invalid configuration; message names the offending field."""


def _load_toml(path: Path) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error in {path}: {exc}")


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return table[key]


def _positive(value, field: str):
    if not isinstance(value, (int, float)) or value <= 0:
        raise ConfigError(f"{field} must be a positive number, got {value!r}")
    return value


def validate_config(cfg: dict) -> dict:
    """Structural validation; returns the config with task names filled in."""
    grid = _require(cfg, "grid", "config")
    n = _require(grid, "n_points", "[grid]")
    if not isinstance(n, int) or n < 8 or n % 2 != 0:
        raise ConfigError(f"[grid].n_points must be an even integer >= 8, got {n!r}")
    _positive(_require(grid, "half_width", "[grid]"), "[grid].half_width")
    _positive(grid.get("hbar", 1.0), "[grid].hbar")

    windows = cfg.get("windows", {})
    for name, spec in windows.items():
        kind = _require(spec, "kind", f"[windows.{name}]")
        if kind not in ("gaussian", "hermite1", "displaced_gaussian"):
            raise ConfigError(f"[windows.{name}].kind: unknown kind {kind!r}")
        if kind == "displaced_gaussian" and "center" not in spec:
            raise ConfigError(f"[windows.{name}]: displaced_gaussian needs 'center'")

    tasks = cfg.get("tasks", [])
    if not isinstance(tasks, list):
        raise ConfigError("tasks must be an array of tables")
    seen = set()
    for i, task in enumerate(tasks):
        where = f"[[tasks]] #{i + 1}"
        ttype = _require(task, "type", where)
        if ttype not in TASK_TYPES:
            raise ConfigError(f"{where}: unknown task type {ttype!r}")
        name = task.setdefault("name", ttype)
        if name in seen:
            raise ConfigError(f"{where}: duplicate task name {name!r}")
        seen.add(name)
        for field in ("window",):
            if field in task and task[field] not in windows:
                raise ConfigError(f"{where}: undefined window {task[field]!r}")
        if ttype in ("wigner", "toeplitz", "lattice", "norms") and "window" not in task:
            raise ConfigError(f"{where}: task type {ttype!r} requires 'window'")
        if ttype == "density" and "window" not in task:
            raise ConfigError(f"{where}: density task requires 'window'")
        if ttype == "covariance":
            if "window" not in task:
                raise ConfigError(f"{where}: covariance task requires 'window'")
            for word in task.get("words", []):
                for gen in word:
                    if not _WORD_RE.match(gen):
                        raise ConfigError(f"{where}: bad generator spec {gen!r}")
        for tol in ("tol_trace", "tol_psd"):
            if tol in task:
                _positive(task[tol], f"{where}.{tol}")
    return cfg


def _parse_word(specs):
    from .metaplectic import Chirp, Dilate, Fourier

    word = []
    for spec in specs:
        m = _WORD_RE.match(spec)
        if not m:
            raise ConfigError(f"bad generator spec {spec!r}")
        kind, arg = m.group(1), m.group(2)
        if kind == "fourier":
            word.append(Fourier())
        elif kind == "chirp":
            word.append(Chirp(float(arg)))
        else:
            word.append(Dilate(float(arg)))
    return word


def _build_symbol(spec: dict, grid):
    import numpy as np

    from .grid import PhaseFunction

    kind = spec.get("kind", "gaussian")
    if kind == "unit":
        return PhaseFunction(grid, np.ones((grid.n_points, grid.n_points), dtype=complex))
    if kind == "gaussian":
        var = spec.get("variance", [1.0, 1.0])
        if isinstance(var, (int, float)):
            var = [var, var]
        x0, p0 = spec.get("center", [0.0, 0.0])
        amp = spec.get("amplitude", 1.0)
        X, P = grid.meshgrid()
        vals = amp * np.exp(-((X - x0) ** 2) / (2 * var[0]) - ((P - p0) ** 2) / (2 * var[1]))
        return PhaseFunction(grid, vals.astype(complex))
    if kind == "samples":
        vals = _read_grid_csv(Path(spec["path"]), grid.n_points)
        return PhaseFunction(grid, vals)
    raise ConfigError(f"unknown symbol kind {kind!r}")


def _build_mu(spec: dict, grid):
    from .toeplitz import LatticeMixture, ProbabilityDensity, gaussian_density
    from .grid import PhaseFunction

    kind = spec.get("kind", "gaussian")
    if kind == "gaussian":
        return gaussian_density(grid, spec.get("variance", 1.0),
                                tuple(spec.get("center", (0.0, 0.0))))
    if kind == "atoms":
        atoms = spec["atoms"]
        return LatticeMixture([(a[0], a[1]) for a in atoms], [a[2] for a in atoms])
    if kind == "samples":
        vals = _read_grid_csv(Path(spec["path"]), grid.n_points)
        return ProbabilityDensity(PhaseFunction(grid, vals.real))
    raise ConfigError(f"unknown mu kind {kind!r}")


def _fmt(x: float) -> str:
    # 17 significant digits: enough to round-trip any float64 exactly
    return f"{x:.16e}"


def _write_vector_csv(path: Path, header: str, values):
    lines = [header]
    lines += [_fmt(float(v)) for v in values]
    path.write_text("\n".join(lines) + "\n")


def _write_grid_csv(path: Path, grid, values):
    import numpy as np

    values = np.asarray(values)
    header = "x\\p," + ",".join(_fmt(p) for p in grid.p)
    lines = [header]
    for j in range(grid.n_points):
        lines.append(_fmt(grid.x[j]) + "," + ",".join(_fmt(v) for v in values[j]))
    path.write_text("\n".join(lines) + "\n")


def _read_grid_csv(path: Path, n: int):
    import numpy as np

    rows = []
    with open(path) as fh:
        next(fh)                      # header
        for line in fh:
            parts = line.strip().split(",")
            rows.append([float(v) for v in parts[1:]])
    vals = np.asarray(rows, dtype=complex)
    if vals.shape != (n, n):
        raise ConfigError(f"samples file {path} has shape {vals.shape}, expected ({n}, {n})")
    return vals


def _write_spectrum_csv(path: Path, eigenvalues):
    lines = ["k,eigenvalue"]
    lines += [f"{k},{_fmt(float(v))}" for k, v in enumerate(eigenvalues)]
    path.write_text("\n".join(lines) + "\n")


def _write_report(path: Path, report: dict):
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _get_window(name, windows, grid, cache):
    from .transforms import standard_window

    if name not in cache:
        spec = windows[name]
        cache[name] = standard_window(spec["kind"], grid, spec.get("center"))
    return cache[name]


def _run_task(task: dict, grid, windows, cache, out: Path, quiet: bool) -> list:
    """Execute one task; returns the list of files written."""
    import numpy as np

    from . import (cross_wigner, density_from_measure, lattice_mixed_state,
                   m1_norm, m1inf_norm, m1_norm_phase,
                   toeplitz_conv, toeplitz_direct, toeplitz_covariance_residual,
                   validate_density, weyl_covariance_residual, weyl_quantize,
                   weyl_symbol)
    from .metaplectic import wigner_covariance_residual
    from .toeplitz import LatticeMixture

    name = task["name"]
    ttype = task["type"]
    written = []

    def emit_grid(suffix, values):
        p = out / f"{name}_{suffix}.csv"
        _write_grid_csv(p, grid, values)
        written.append(p.name)
        for label, header, coords in (("xgrid", "x [position]", grid.x),
                                      ("pgrid", "p [momentum]", grid.p)):
            cp = out / f"{name}_{label}.csv"
            _write_vector_csv(cp, header, coords)
            written.append(cp.name)

    def emit_report(report):
        p = out / f"{name}_report.json"
        _write_report(p, report)
        written.append(p.name)

    def emit_spectrum(evals):
        p = out / f"{name}_spectrum.csv"
        _write_spectrum_csv(p, evals)
        written.append(p.name)

    if ttype == "wigner":
        phi = _get_window(task["window"], windows, grid, cache)
        W = cross_wigner(phi, phi)
        emit_grid("grid", W.values.real)
        emit_report({
            "task": ttype,
            "window": task["window"],
            "value_at_origin": float(W.values.real[grid.n_points // 2, grid.n_points // 2]),
            "mass": float(np.real(W.integral())),
            "max_imag_residue": float(np.max(np.abs(W.values.imag))),
        })

    elif ttype == "quantize":
        a = _build_symbol(task.get("symbol", {}), grid)
        op = weyl_quantize(a)
        back = weyl_symbol(op)
        emit_grid("grid", back.values.real)
        emit_report({
            "task": ttype,
            "hermiticity_defect": op.hermiticity_defect(),
            "trace": float(np.real(op.trace())),
            "roundtrip_max_err": float(np.max(np.abs(back.values - a.values))),
        })

    elif ttype == "toeplitz":
        a = _build_symbol(task.get("symbol", {}), grid)
        phi = _get_window(task["window"], windows, grid, cache)
        paths = task.get("paths", ["conv"])
        ops = {}
        for p in paths:
            if p == "conv":
                ops[p] = toeplitz_conv(a, phi)
            elif p == "direct":
                ops[p] = toeplitz_direct(a, phi, thin=task.get("thin"))
            else:
                raise ConfigError(f"task {name}: unknown path {p!r}")
        report = {"task": ttype, "paths": paths}
        for p, op in ops.items():
            report[f"{p}_trace"] = float(np.real(op.trace()))
            report[f"{p}_hermiticity_defect"] = op.hermiticity_defect()
            if "thin" in op.meta:
                report[f"{p}_thin"] = op.meta["thin"]
        if len(ops) == 2:
            d, c = ops["direct"].entries, ops["conv"].entries
            report["relative_frobenius_distance"] = float(
                np.linalg.norm(d - c) / np.linalg.norm(c))
        first = ops[paths[0]]
        sym = 0.5 * (first.entries + first.entries.conj().T)
        evals = np.linalg.eigvalsh(sym * grid.dx)[::-1]
        emit_spectrum(evals)
        emit_report(report)

    elif ttype == "density":
        phi = _get_window(task["window"], windows, grid, cache)
        mu = _build_mu(task.get("mu", {}), grid)
        rho, wig = density_from_measure(mu, phi, task.get("path", "conv"))
        rep = validate_density(rho, task.get("tol_trace", 1e-6), task.get("tol_psd", 1e-8))
        emit_grid("grid", wig.values.real)
        emit_spectrum(rep.eigenvalues)
        report = {"task": ttype, "path": task.get("path", "conv")}
        report.update(rep.as_dict())
        report["raw_trace"] = rho.meta.get("raw_trace")
        emit_report(report)

    elif ttype == "lattice":
        phi = _get_window(task["window"], windows, grid, cache)
        atoms = task["atoms"]
        mix = LatticeMixture([(a[0], a[1]) for a in atoms], [a[2] for a in atoms])
        rho, wig = lattice_mixed_state(mix, phi)
        rep = validate_density(rho, task.get("tol_trace", 1e-6), task.get("tol_psd", 1e-8))
        emit_grid("grid", wig.values.real)
        emit_spectrum(rep.eigenvalues)
        report = {"task": ttype, "atoms": atoms}
        report.update(rep.as_dict())
        emit_report(report)

    elif ttype == "covariance":
        a = _build_symbol(task.get("symbol", {}), grid)
        phi = _get_window(task["window"], windows, grid, cache)
        residuals = []
        for specs in task.get("words", []):
            word = _parse_word(specs)
            residuals.append({
                "word": list(specs),
                "weyl": weyl_covariance_residual(a, word),
                "toeplitz": toeplitz_covariance_residual(a, phi, word),
                "wigner": wigner_covariance_residual(phi, word),
            })
        emit_report({"task": ttype, "window": task["window"], "residuals": residuals})

    elif ttype == "norms":
        phi = _get_window(task["window"], windows, grid, cache)
        points = task.get("points", [24, 32])
        b_scale = task.get("b_scale", 1.0)
        report = {"task": ttype, "b_scale": b_scale, "points": points}
        m1 = m1_norm(phi, phi)
        report["m1_window"] = {"value": m1.value, "resolution": m1.grid_resolution}
        if "mu" in task:
            mu = _build_mu(task["mu"], grid)
            if isinstance(mu, LatticeMixture):
                raise ConfigError(f"task {name}: norms requires a continuous mu")
            estimates = []
            for npts in points:
                est = m1inf_norm(mu.mu, b_scale, npts)
                phase_est = m1_norm_phase(mu.mu, b_scale, npts)
                estimates.append({
                    "points_per_axis": npts,
                    "m1inf": est.value,
                    "m1_phase": phase_est.value,
                })
            report["mu_estimates"] = estimates
        emit_report(report)

    elif ttype == "bench":
        from .grid import make_grid as mk
        from .transforms import standard_window as sw

        sizes = task.get("sizes", [64, 128])
        rows = []
        for n in sizes:
            gb = mk(int(n), grid.half_width, grid.hbar)
            phi = sw("gaussian", gb)
            a = _build_symbol(task.get("symbol", {"kind": "gaussian"}), gb)
            t0 = time.perf_counter()
            toeplitz_direct(a, phi, thin=task.get("thin", 1))
            t_direct = time.perf_counter() - t0
            t0 = time.perf_counter()
            toeplitz_conv(a, phi)
            t_conv = time.perf_counter() - t0
            rows.append({"n_points": int(n), "direct_s": t_direct, "conv_s": t_conv,
                         "speedup": t_direct / t_conv if t_conv > 0 else float("inf")})
        emit_report({"task": ttype, "timings": rows})

    else:  # pragma: no cover - guarded by validate_config
        raise ConfigError(f"unknown task type {ttype!r}")

    if not quiet:
        print(f"  task {name} ({ttype}): wrote {', '.join(written) or 'nothing'}")
    return written


def _cmd_run(args) -> int:
    try:
        cfg = validate_config(_load_toml(Path(args.config)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    from .grid import make_grid

    out = Path(args.output_dir or cfg.get("output_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    gcfg = cfg["grid"]
    grid = make_grid(gcfg["n_points"], gcfg["half_width"], gcfg.get("hbar", 1.0))
    windows = cfg.get("windows", {})
    cache: dict = {}

    import numpy as np
    import scipy

    from . import __version__

    manifest = {
        "config_file": str(args.config),
        "grid": {"n_points": grid.n_points, "half_width": grid.half_width,
                 "hbar": grid.hbar, "dx": grid.dx, "dp": grid.dp},
        "versions": {"phasequant": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__,
                     "python": ".".join(map(str, sys.version_info[:3]))},
        "tasks": [],
    }
    status = 0
    for task in cfg.get("tasks", []):
        t0 = time.perf_counter()
        entry = {"name": task["name"], "type": task["type"]}
        try:
            entry["outputs"] = _run_task(task, grid, windows, cache, out, args.quiet)
            entry["status"] = "ok"
        except ConfigError as exc:
            print(f"task {task['name']} failed: {exc}", file=sys.stderr)
            entry["status"] = f"error: {exc}"
            status = 1
        except Exception as exc:  # noqa: BLE001 -报告 and keep prior outputs
            print(f"task {task['name']} failed: {exc}", file=sys.stderr)
            entry["status"] = f"error: {exc}"
            status = 1
        entry["elapsed_s"] = time.perf_counter() - t0
        manifest["tasks"].append(entry)
        if entry["status"] != "ok":
            break
    _write_report(out / "manifest.json", manifest)
    if not args.quiet:
        print(f"manifest written to {out / 'manifest.json'}")
    return status


def _cmd_validate(args) -> int:
    try:
        validate_config(_load_toml(Path(args.config)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print("config ok")
    return 0


def _cmd_selftest(args) -> int:
    from .acceptance import run_all

    printer = (lambda s: None) if args.quiet else print
    results = run_all(printer=printer)
    failed = [r for r in results if not r.passed]
    if failed and args.quiet:
        for r in failed:
            print(f"[FAIL] {r.cid}: {r.detail}", file=sys.stderr)
    return 0 if not failed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pq", description="phase-space quantum state toolkit runner")

    def add_common(p):
        # also valid after the subcommand; SUPPRESS keeps the top-level value
        # when the flag is only given up front
        p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                       help="cap BLAS/OpenMP threads (default: PQ_THREADS or unlimited)")
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                       help="suppress progress output")

    parser.add_argument("--threads", type=int, default=None,
                        help="cap BLAS/OpenMP threads (default: PQ_THREADS or unlimited)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a config")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", default=None)
    add_common(p_run)
    p_val = sub.add_parser("validate", help="parse and validate a config")
    p_val.add_argument("config")
    add_common(p_val)
    p_self = sub.add_parser("selftest", help="run the acceptance battery")
    add_common(p_self)

    args = parser.parse_args(argv)

    threads = args.threads
    if threads is None and os.environ.get("PQ_THREADS"):
        try:
            threads = int(os.environ["PQ_THREADS"])
        except ValueError:
            print(f"ignoring malformed PQ_THREADS={os.environ['PQ_THREADS']!r}",
                  file=sys.stderr)
    if threads is not None and threads > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                    "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, str(threads))

    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return _cmd_selftest(args)


if __name__ == "__main__":
    sys.exit(main())
