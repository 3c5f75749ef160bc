"""Batch command-line front end.

Commands orchestrate the library modules and emit deterministic artifacts
(CSV / JSON / SVG) into an output directory, together with the fully
resolved configuration used (config.json) for provenance.

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, fields

import numpy as np

from .params import ModelParams, ParameterError
from . import spectra, entanglement, classical, wigner, svgplot
from .hilbert import build_basis, assemble_hamiltonian

COMMANDS = ("scan-entropy", "fixed-points", "bifurcation", "wigner",
            "trajectory", "report")
FORMATS = ("csv", "json", "svg")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    command: str
    j: float = 4.5
    omega: float = 1.0
    epsilon: float = 1.0
    g: float = None
    g_prime: float = None
    hbar: float = 1.0
    mode: str = "integrable"        # integrable | symmetric | custom
    lam: str = None                 # "start:end:step" or single value
    n_max: int = None
    grid_n: int = 512
    t_final: float = 100.0
    tol: float = 1e-10
    energy: float = None
    initial: str = None             # "q1,p1,q2,p2"
    seed: str = None                # pitchfork+ | pitchfork- | hopf
    out: str = "."
    formats: str = "csv,json,svg"

    def format_set(self):
        fmts = [f.strip() for f in self.formats.split(",") if f.strip()]
        for f in fmts:
            if f not in FORMATS:
                raise ConfigError(f"unknown format {f!r}")
        return set(fmts)


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def parse_lambda_grid(spec):
    """'start:end:step' -> strictly increasing grid; single value -> [value]."""
    if spec is None:
        raise ConfigError("missing --lambda")
    parts = str(spec).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        start, end, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"bad lambda spec {spec!r}; use START:END:STEP") from None
    if step <= 0 or end < start:
        raise ConfigError("lambda grid requires step > 0 and end >= start")
    count = int(np.floor((end - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def load_config(path=None, flags=None):
    """RunConfig from an optional JSON file with flag overrides."""
    data = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        for key in raw:
            norm = key.replace("-", "_")
            if norm == "lambda":
                norm = "lam"
            if norm not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            data[norm] = raw[key]
    if flags:
        for key, val in flags.items():
            if val is not None:
                data[key] = val
    if "command" not in data:
        raise ConfigError("missing command")
    if data["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {data['command']!r}")
    cfg = RunConfig(**data)
    cfg.format_set()
    if cfg.mode not in ("integrable", "symmetric", "custom"):
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    return cfg


def _model_params(cfg: RunConfig, lam=None):
    base = ModelParams(omega=cfg.omega, epsilon=cfg.epsilon, j=cfg.j,
                       hbar=cfg.hbar)
    if cfg.mode == "custom":
        if cfg.g is None:
            raise ConfigError("mode=custom requires --g (and optionally --g-prime)")
        return base.with_coupling(cfg.g, cfg.g_prime or 0.0)
    if lam is None:
        grid = parse_lambda_grid(cfg.lam)
        if grid.size != 1:
            raise ConfigError("this command takes a single --lambda value")
        lam = float(grid[0])
    return base.at_lambda(lam, cfg.mode)


def _fmt_val(v):
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_val(v) for v in row) + "\n")


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _parallel_map():
    n = os.environ.get("DICKE_LAB_THREADS")
    workers = int(n) if n else (os.cpu_count() or 1)
    if workers <= 1:
        return map
    pool = ThreadPoolExecutor(max_workers=workers)

    def mapper(fn, items):
        return pool.map(fn, items)

    return mapper


def _cmd_scan_entropy(cfg, out):
    grid = parse_lambda_grid(cfg.lam)
    if cfg.mode == "custom":
        raise ConfigError("scan-entropy requires mode integrable or symmetric")
    base = ModelParams(omega=cfg.omega, epsilon=cfg.epsilon, j=cfg.j, hbar=cfg.hbar)
    rows = entanglement.entropy_scan(base, grid, cfg.mode, n_max=cfg.n_max,
                                     map_fn=_parallel_map())
    fmts = cfg.format_set()
    data = [(r.lam, r.lam_plus, r.energy, r.entropy, r.participation, r.degenerate)
            for r in rows]
    if "csv" in fmts:
        write_csv(os.path.join(out, "entropy.csv"),
                  ["lambda", "lambda_plus", "energy", "entropy",
                   "participation", "degenerate"], data)
    if "svg" in fmts:
        xs = [r.lam_plus if cfg.mode == "symmetric" else r.lam for r in rows]
        doc = svgplot.line_chart(
            [(f"J={cfg.j}", xs, [r.entropy for r in rows])],
            xlabel="lambda_+" if cfg.mode == "symmetric" else "lambda",
            ylabel="linear entropy S", vlines=(1.0,))
        with open(os.path.join(out, "entropy.svg"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(doc)


def _fp_record(fp):
    rep = fp.representative
    rec = {"kind": fp.kind, "stability": fp.stability,
           "q1": rep.q1, "p1": rep.p1, "q2": rep.q2, "p2": rep.p2}
    if fp.radii is not None:
        rec["r1"], rec["r2"] = fp.radii
        rec["phase_lock"] = fp.phase_lock
    return rec


def _cmd_fixed_points(cfg, out):
    p = _model_params(cfg)
    fps = classical.analytic_fixed_points(p)
    obj = {
        "params": {"omega": p.omega, "epsilon": p.epsilon, "g": p.g,
                   "g_prime": p.g_prime, "j": p.j, "hbar": p.hbar},
        "fixed_points": [_fp_record(fp) for fp in fps],
    }
    write_json(os.path.join(out, "fixed_points.json"), obj)


def _cmd_bifurcation(cfg, out):
    if cfg.mode == "custom":
        raise ConfigError("bifurcation requires mode integrable or symmetric")
    grid = parse_lambda_grid(cfg.lam)
    base = ModelParams(omega=cfg.omega, epsilon=cfg.epsilon, j=cfg.j, hbar=cfg.hbar)
    rows = classical.bifurcation_scan(base, grid, cfg.mode)
    write_csv(os.path.join(out, "bifurcation.csv"),
              ["lambda", "lambda_plus", "kind", "stability",
               "q1", "p1", "q2", "p2", "r1", "r2"],
              [(r["lambda"], r["lambda_plus"], r["kind"], r["stability"],
                r["q1"], r["p1"], r["q2"], r["p2"],
                "" if r["r1"] is None else r["r1"],
                "" if r["r2"] is None else r["r2"]) for r in rows])


def _ground_state_for(cfg, p):
    n_max = cfg.n_max
    if n_max is None:
        n_max = spectra.converge_truncation(p, tol=cfg.tol)
    if p.g_prime == 0:
        return spectra.ground_state_blockwise(p, n_max)
    basis = build_basis(p.j, n_max)
    return spectra.ground_state(assemble_hamiltonian(p, basis), use_parity=True)


def _cmd_wigner(cfg, out):
    p = _model_params(cfg)
    gs = _ground_state_for(cfg, p)
    rho = entanglement.reduced_atomic_dm(gs)
    decomp = wigner.multipole_decompose(rho, p.j)
    grid = wigner.evaluate_wigner_plane(decomp, n=cfg.grid_n, params=p)
    fmts = cfg.format_set()
    if "csv" in fmts:
        xs, ys = np.meshgrid(grid.x, grid.y)
        mask = np.isfinite(grid.values)
        write_csv(os.path.join(out, "wigner.csv"), ["x", "y", "w"],
                  zip(xs[mask], ys[mask], grid.values[mask]))
    area, a_n = wigner.half_height_area(grid, p.n_atoms, hbar=p.hbar)
    ints = wigner.sphere_integrals(decomp)
    metrics = {
        "energy": gs.energy,
        "half_height_area": area,
        "area_per_atom": a_n,
        "negativity_volume": ints["neg_volume"],
        "min_value": min(ints["min_value"], float(np.nanmin(grid.values))),
        "unit_integral": ints["total"],
        "parseval_lhs": ints["square"],
        "purity": entanglement.linear_entropy(rho)[0],
    }
    circles = []
    try:
        metrics["ridge_radius"] = wigner.ridge_radius(grid)
        circles.append(metrics["ridge_radius"])
    except ParameterError:
        peaks = wigner.local_maxima(grid)
        metrics["peaks"] = [{"x": x, "y": y, "w": w} for x, y, w in peaks]
    for fp in classical.analytic_fixed_points(p):
        if fp.kind == "hopf_circle":
            circles.append(fp.radii[0] / np.sqrt(4 * p.j))
    if "json" in fmts:
        write_json(os.path.join(out, "wigner_metrics.json"), metrics)
    if "svg" in fmts:
        doc = svgplot.wigner_chart(grid, circles=circles)
        with open(os.path.join(out, "wigner.svg"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(doc)


def _initial_point(cfg, p):
    if cfg.initial is not None:
        vals = [float(v) for v in cfg.initial.split(",")]
        if len(vals) != 4:
            raise ConfigError("--initial needs q1,p1,q2,p2")
        return classical.PhasePoint(*vals)
    if cfg.seed is None:
        raise ConfigError("trajectory needs --initial or --seed")
    fps = classical.analytic_fixed_points(p)
    if cfg.seed in ("pitchfork+", "pitchfork-"):
        sign = 1 if cfg.seed.endswith("+") else -1
        match = [fp for fp in fps if fp.kind == "pitchfork_I"
                 and np.sign(fp.representative.p1) == sign]
    elif cfg.seed == "hopf":
        match = [fp for fp in fps if fp.kind == "hopf_circle"]
    else:
        raise ConfigError(f"unknown seed {cfg.seed!r}")
    if not match:
        raise ConfigError(f"no {cfg.seed} fixed point at these parameters")
    base = match[0].representative
    if cfg.energy is None:
        return base
    return classical.point_at_energy(p, base, cfg.energy, axis="q1")


def _cmd_trajectory(cfg, out):
    p = _model_params(cfg)
    p0 = _initial_point(cfg, p)
    traj = classical.integrate_trajectory(p0, p, cfg.t_final, tol=cfg.tol)
    energies = traj.energies(p)
    write_csv(os.path.join(out, "trajectory.csv"),
              ["t", "q1", "p1", "q2", "p2", "energy"],
              [(t, *y, e) for t, y, e in zip(traj.times, traj.samples, energies)])
    if "svg" in cfg.format_set():
        scale = np.sqrt(4 * p.j)
        doc = svgplot.line_chart(
            [("atomic plane", traj.samples[:, 0] / scale, traj.samples[:, 1] / scale)],
            xlabel="q1 / sqrt(4J)", ylabel="p1 / sqrt(4J)")
        with open(os.path.join(out, "trajectory.svg"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(doc)


def _cmd_report(cfg, out):
    """Entropy staircases, bifurcation table, and both Wigner cases."""
    from dataclasses import replace
    base = ModelParams(omega=cfg.omega, epsilon=cfg.epsilon, hbar=cfg.hbar, j=1.5)
    grid = parse_lambda_grid(cfg.lam or "0:4:0.02")
    series = []
    for j in (1.5, 4.5, 7.5):
        rows = entanglement.entropy_scan(replace(base, j=j), grid, "integrable",
                                         map_fn=_parallel_map())
        write_csv(os.path.join(out, f"entropy_integrable_J{j}.csv"),
                  ["lambda", "lambda_plus", "energy", "entropy",
                   "participation", "degenerate"],
                  [(r.lam, r.lam_plus, r.energy, r.entropy, r.participation,
                    r.degenerate) for r in rows])
        series.append((f"J={j}", [r.lam for r in rows], [r.entropy for r in rows]))
    with open(os.path.join(out, "entropy_integrable.svg"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(svgplot.line_chart(series, xlabel="lambda",
                                    ylabel="linear entropy S", vlines=(1.0,)))
    sub = RunConfig(command="bifurcation", j=cfg.j, omega=cfg.omega,
                    epsilon=cfg.epsilon, hbar=cfg.hbar, mode="integrable",
                    lam=cfg.lam or "0:4:0.02", out=out)
    _cmd_bifurcation(sub, out)
    for name, mode, lam in (("integrable", "integrable", "1.5"),
                            ("symmetric", "symmetric", "1.5")):
        sub = RunConfig(command="wigner", j=cfg.j, omega=cfg.omega,
                        epsilon=cfg.epsilon, hbar=cfg.hbar, mode=mode, lam=lam,
                        n_max=cfg.n_max, grid_n=min(cfg.grid_n, 256), out=out)
        wdir = os.path.join(out, f"wigner_{name}")
        os.makedirs(wdir, exist_ok=True)
        _cmd_wigner(sub, wdir)


_DISPATCH = {
    "scan-entropy": _cmd_scan_entropy,
    "fixed-points": _cmd_fixed_points,
    "bifurcation": _cmd_bifurcation,
    "wigner": _cmd_wigner,
    "trajectory": _cmd_trajectory,
    "report": _cmd_report,
}


def run(cfg: RunConfig):
    """Execute a resolved configuration; returns the exit status."""
    out = cfg.out
    os.makedirs(out, exist_ok=True)
    write_json(os.path.join(out, "config.json"), asdict(cfg))
    _DISPATCH[cfg.command](cfg, out)
    return 0


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="dicke-lab",
        description="Dicke-model phase-transition laboratory (batch runs)")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file; flags override it")
    ap.add_argument("--j", type=float)
    ap.add_argument("--omega", type=float)
    ap.add_argument("--epsilon", type=float)
    ap.add_argument("--g", type=float)
    ap.add_argument("--g-prime", dest="g_prime", type=float)
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--mode", choices=("integrable", "symmetric", "custom"))
    ap.add_argument("--lambda", dest="lam", help="START:END:STEP or a single value")
    ap.add_argument("--n-max", dest="n_max", type=int)
    ap.add_argument("--grid-n", dest="grid_n", type=int)
    ap.add_argument("--t-final", dest="t_final", type=float)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--energy", type=float)
    ap.add_argument("--initial", help="q1,p1,q2,p2")
    ap.add_argument("--seed", help="pitchfork+ | pitchfork- | hopf")
    ap.add_argument("--out")
    ap.add_argument("--format", dest="formats", help="subset of csv,json,svg")
    return ap


def main(argv=None):
    args = vars(_build_parser().parse_args(argv))
    config_path = args.pop("config")
    try:
        cfg = load_config(config_path, flags=args)
        return run(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (spectra.ConvergenceError, classical.IntegrationError,
            classical.DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
