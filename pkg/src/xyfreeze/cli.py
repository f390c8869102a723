"""
Command-line entry point: ``xyfreeze <command> [options]``.

Commands write one dataset (CSV by default, see :mod:`xyfreeze.dataset`)
to ``--out`` or to stdout.  Exit status is 0 on success, 1 for invalid
configuration and 2 when a run fails or the oracle check finds a mismatch.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import __version__, oracle, verify
from .chain import ChainSpec
from .config import ConfigError, RunConfig, build_config, load_config
from .dataset import Dataset
from .freezing import (GridTooCoarseError, anisotropy_scan, critical_temperature_fit,
                       default_jobs, detect_freezing, evaluate_many, gap_freezing,
                       lambda_grid, sweep, thermal_scan)

log = logging.getLogger("xyfreeze")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

_ORACLE_DEFAULT_N = [4, 6, 8, 10]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code is reserved for run failures here
    def error(self, message):
        raise ConfigError(message)


def _grid(cfg: RunConfig, prefix: str):
    lo, hi, step = (getattr(cfg, f"{prefix}_{s}") for s in ("min", "max", "step"))
    try:
        return lambda_grid(lo, hi, step)
    except ValueError as exc:
        raise ConfigError(f"{prefix} grid: {exc}") from None


def _base_point(n, l2, gamma, beta):
    return dict(n=n, lambda2=float(l2), gamma=float(gamma), beta=float(beta))


def _point_columns(p):
    t, m = p.correlators, p.measures
    return dict(lambda1=p.lambda1, txx=t.txx, tyy=t.tyy, tzz=t.tzz,
                mutual_info=m.mutual_info, classical=m.classical, discord=m.discord,
                concurrence=m.concurrence, gap=p.gap)


def _oracle_deviation(spec: ChainSpec) -> float:
    cmp = verify.compare(spec, all_pairs=False, brute=False)
    if cmp.degenerate:
        return math.inf
    return max(cmp.deviations.values())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_sweep(cfg: RunConfig) -> Dataset:
    grid = _grid(cfg, "lambda1")
    if cfg.oracle_check and max(cfg.n) > oracle.MAX_ORACLE_SPINS:
        raise ConfigError(f"oracle check needs n <= {oracle.MAX_ORACLE_SPINS}")
    ds = Dataset("sweep", cfg.header_items())
    failed = False
    for n in cfg.n:
        for l2 in cfg.lambda2:
            template = ChainSpec.weak_end(n, float(grid[0]), l2, gamma=cfg.gamma, beta=cfg.beta)
            result = sweep(template, grid, jobs=cfg.jobs)
            for p in result.points:
                row = _base_point(n, l2, cfg.gamma, cfg.beta) | _point_columns(p)
                if cfg.oracle_check:
                    dev = _oracle_deviation(template.with_lambda1(p.lambda1))
                    failed |= not dev <= verify.EXACT_TOL
                    row["oracle_max_dev"] = dev
                ds.point(**row)
            rep = detect_freezing(result, cfg.eps, cfg.relative_tol, cfg.eps_e)
            ds.summary(kind="freezing", **_base_point(n, l2, cfg.gamma, cfg.beta),
                       l_f=rep.l_f, l_f_err=rep.l_f_err, d_frozen=rep.d_frozen,
                       lambda1_d=rep.esd_point, order_parameter=rep.order_parameter)
            log.info("n=%d lambda2=%g: l_f=%g d_frozen=%.5f lambda1_D=%s", n, l2, rep.l_f,
                     rep.d_frozen, rep.esd_point)
    ds.failed = failed
    return ds


def cmd_surface(cfg: RunConfig) -> Dataset:
    g1, g2 = _grid(cfg, "lambda1"), _grid(cfg, "lambda2")
    if g2[0] <= 0 or g2[-1] > 1:
        raise ConfigError("lambda2 grid must lie within (0, 1]")
    ds = Dataset("surface", cfg.header_items())
    for n in cfg.n:
        specs = [ChainSpec.weak_end(n, float(l1), float(l2), gamma=cfg.gamma, beta=cfg.beta)
                 for l2 in g2 for l1 in g1]
        for spec, p in zip(specs, evaluate_many(specs, cfg.jobs)):
            ds.point(**_base_point(n, spec.lambda2, cfg.gamma, cfg.beta), **_point_columns(p))
    return ds


def cmd_gap(cfg: RunConfig) -> Dataset:
    grid = _grid(cfg, "lambda1")
    ds = Dataset("gap", cfg.header_items())
    for n in cfg.n:
        for l2 in cfg.lambda2:
            template = ChainSpec.weak_end(n, float(grid[0]), l2, gamma=cfg.gamma)
            result = sweep(template, grid, jobs=cfg.jobs)
            for l1, g in zip(grid, result.gap):
                ds.point(n=n, lambda2=float(l2), gamma=cfg.gamma, lambda1=float(l1), gap=float(g))
            rep = gap_freezing(result, cfg.gap_tol)
            ds.summary(kind="gap", n=n, lambda2=float(l2), gamma=cfg.gamma,
                       gap_onset=rep.onset, frozen_gap=rep.frozen_gap,
                       rising_before=rep.rising_before)
    return ds


def cmd_anisotropy(cfg: RunConfig) -> Dataset:
    l1_grid, gammas = _grid(cfg, "lambda1"), _grid(cfg, "gamma")
    ds = Dataset("anisotropy", cfg.header_items())
    for n in cfg.n:
        for l2 in cfg.lambda2:
            rep = anisotropy_scan(gammas, l2, n, l1_grid, cfg.eps, cfg.relative_tol, cfg.beta,
                                  cfg.detector, cfg.jobs)
            for k, g in enumerate(rep.gamma_grid):
                ds.point(n=n, lambda2=float(l2), gamma=float(g), l_f=rep.l_f[k],
                         order_parameter=rep.order_parameter[k], d_frozen=rep.d_frozen[k],
                         d_frozen_curvature=rep.d_frozen_curvature[k])
            ds.summary(kind="anisotropy", n=n, lambda2=float(l2), gamma_c=rep.gamma_c)
            log.info("n=%d lambda2=%g: gamma_c=%s", n, l2, rep.gamma_c)
    return ds


def cmd_thermal(cfg: RunConfig) -> Dataset:
    l1_grid, temps = _grid(cfg, "lambda1"), _grid(cfg, "t")
    ds = Dataset("thermal", cfg.header_items())
    for l2 in cfg.lambda2:
        ns, tcs = [], []
        for n in cfg.n:
            template = ChainSpec.weak_end(n, float(l1_grid[0]), l2, gamma=cfg.gamma)
            rep = thermal_scan(temps, template, l1_grid, cfg.eps, cfg.relative_tol, cfg.rho_min)
            for k, t in enumerate(rep.temperatures):
                ds.point(n=n, lambda2=float(l2), gamma=cfg.gamma, temperature=float(t),
                         l_f_thermal=rep.l_f_thermal[k], ratio=rep.ratio[k])
            ds.summary(kind="thermal", n=n, lambda2=float(l2), gamma=cfg.gamma, l_f=rep.l_f,
                       t_c=rep.t_c, monotone=rep.monotone)
            log.info("n=%d lambda2=%g: T_c=%s", n, l2, rep.t_c)
            if rep.t_c is not None:
                ns.append(n)
                tcs.append(rep.t_c)
        if len(ns) >= 2:
            slope, intercept = critical_temperature_fit(ns, tcs)
            ds.summary(kind="fit", lambda2=float(l2), gamma=cfg.gamma,
                       fit_slope=slope, fit_intercept=intercept)
    return ds


def cmd_oracle_check(cfg: RunConfig, n_values=None) -> Dataset:
    n_values = tuple(n_values or _ORACLE_DEFAULT_N)
    if max(n_values) > oracle.MAX_ORACLE_SPINS:
        raise ConfigError(f"oracle check needs n <= {oracle.MAX_ORACLE_SPINS}")
    ds = Dataset("oracle-check", [("count", cfg.count), ("n", list(n_values)),
                                  ("seed", cfg.seed)])
    specs = verify.random_specs(cfg.count, n_values=n_values, seed=cfg.seed)
    passed = 0
    for spec, cmp in zip(specs, verify.oracle_check(specs)):
        passed += cmp.passed
        dev_exact = max(v for k, v in cmp.deviations.items() if not k.startswith("brute_"))
        dev_brute = max(v for k, v in cmp.deviations.items() if k.startswith("brute_"))
        ds.point(n=spec.n_spins, lambda1=spec.lambda1, lambda2=spec.lambda2, gamma=spec.gamma,
                 beta=spec.beta, max_dev=dev_exact, max_dev_grid_search=dev_brute,
                 degenerate=cmp.degenerate, passed=cmp.passed)
    ds.summary(checked=len(specs), passed_count=passed)
    log.info("oracle check: %d/%d passed", passed, len(specs))
    if passed != len(specs):
        ds.failed = True
    return ds


COMMANDS = {
    "sweep": (cmd_sweep, "discord, entanglement and correlators along lambda1"),
    "surface": (cmd_surface, "the same quantities on a lambda1 x lambda2 grid"),
    "gap": (cmd_gap, "energy gap along lambda1 and its frozen value"),
    "anisotropy": (cmd_anisotropy, "order parameter lambda2 - l_f along gamma"),
    "thermal": (cmd_thermal, "thermal freezing-length ratio and critical temperature"),
    "oracle-check": (cmd_oracle_check, "compare the fermion route with exact diagonalisation"),
}


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _add_options(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--n", type=int, nargs="+", default=S, help="chain length(s)")
    p.add_argument("--lambda2", type=float, nargs="+", default=S, help="second-bond coupling(s)")
    for prefix, what in (("lambda1", "end coupling"), ("lambda2", "surface lambda2"),
                         ("gamma", "anisotropy"), ("t", "temperature")):
        for part in ("min", "max", "step"):
            p.add_argument(f"--{prefix}-{part}", dest=f"{prefix}_{part}", type=float,
                           default=S, help=f"{what} grid {part}")
    p.add_argument("--gamma", type=float, default=S, help="bulk anisotropy")
    p.add_argument("--beta", type=float, default=S, help="inverse temperature (inf = ground)")
    p.add_argument("--eps", type=float, default=S, help="discord plateau tolerance (bits)")
    p.add_argument("--eps-e", dest="eps_e", type=float, default=S,
                   help="concurrence threshold for sudden death")
    p.add_argument("--relative-tol", dest="relative_tol", action=argparse.BooleanOptionalAction,
                   default=S, help="scale eps by the reference discord")
    p.add_argument("--rho-min", dest="rho_min", type=float, default=S,
                   help="thermal ratio threshold defining T_c")
    p.add_argument("--gap-tol", dest="gap_tol", type=float, default=S)
    p.add_argument("--detector", choices=["drop", "magnitude"], default=S)
    p.add_argument("--count", type=int, default=S, help="oracle-check sample size")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--oracle-check", dest="oracle_check", action=argparse.BooleanOptionalAction,
                   default=S, help="compare every sweep point with exact diagonalisation")
    p.add_argument("--out", "-o", default=S, help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=S)
    p.add_argument("--jobs", "-j", type=int, default=S,
                   help="worker processes (default $XYFREEZE_JOBS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xyfreeze", description="Freezing of long-range correlations in "
                     "weakly end-coupled XY chains.")
    parser.add_argument("--version", action="version", version=f"xyfreeze {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        _add_options(sub.add_parser(name, help=help_text, description=help_text))
    return parser


def resolve(argv=None) -> tuple[str, RunConfig, set]:
    """Parse arguments into ``(command, config, explicitly set keys)``."""
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    verbose = args.pop("verbose")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    path = args.pop("config", None)
    file_values = load_config(path) if path else {}
    explicit = set(file_values) | set(args)
    if "jobs" not in explicit:
        args["jobs"] = default_jobs()
    return command, build_config(file_values, args), explicit


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        command, cfg, explicit = resolve(argv)
        func = COMMANDS[command][0]
        if command == "oracle-check":
            ds = func(cfg, cfg.n if "n" in explicit else None)
        else:
            ds = func(cfg)
    except (ConfigError, GridTooCoarseError) as exc:
        print(f"xyfreeze: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"xyfreeze: run failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        if cfg.out:
            ds.write(cfg.out, cfg.format)
        else:
            stdout.write(ds.render(cfg.format))
    except OSError as exc:
        print(f"xyfreeze: cannot write output: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if ds.failed:
        print("xyfreeze: oracle mismatch", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
