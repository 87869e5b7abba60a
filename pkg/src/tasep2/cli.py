"""Command-line interface.

Subcommands: predict, simulate, compare, ring-currents, self-test.
Exit codes: 0 success, 2 configuration error, 3 failed acceptance check
(compare with --assert-linf, or a failing self-test).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, Tasep2Error
from .harness import (
    ExperimentConfig,
    load_config,
    write_comparison,
    write_prediction,
    write_simulation,
)
from .ring import RingCounts, ring_currents

PAPER_SCALE_L = 2100


def _add_experiment_args(p: argparse.ArgumentParser, need_seeds: bool) -> None:
    p.add_argument("--config", type=Path, default=None, help="experiment JSON document")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--rho-left", default=None, metavar="W,B",
                   help="white,black densities left of the wall")
    p.add_argument("--rho-right", default=None, metavar="W,B")
    p.add_argument("-L", "--half-width", type=int, default=None,
                   help="lattice half-width (sites -L..L-1)")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use the large lattice (L={PAPER_SCALE_L})")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n-xi", type=int, default=None, help="prediction grid size")
    p.add_argument("--measurement-times", default=None, metavar="T1,T2,...")
    if need_seeds:
        p.add_argument("--seeds", default=None, metavar="S1,S2,...")
        p.add_argument("--seed", type=int, default=None,
                       help="base seed; expands to seed..seed+replicas-1")
        p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, help="output directory")


def _parse_pair(text: str, what: str) -> dict:
    try:
        w, b = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{what} must be 'white,black', got {text!r}") from exc
    return {"white": w, "black": b}


def _build_config(args: argparse.Namespace, need_seeds: bool) -> ExperimentConfig:
    overrides: dict = {}
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.rho_left is not None:
        overrides["rho_left"] = _parse_pair(args.rho_left, "--rho-left")
    if args.rho_right is not None:
        overrides["rho_right"] = _parse_pair(args.rho_right, "--rho-right")
    if args.half_width is not None:
        overrides["L"] = args.half_width
    if args.paper_scale:
        overrides["L"] = PAPER_SCALE_L
    if args.t_max is not None:
        overrides["t_max"] = args.t_max
    if args.n_xi is not None:
        overrides["n_xi"] = args.n_xi
    if args.measurement_times is not None:
        overrides["measurement_times"] = [float(t) for t in args.measurement_times.split(",")]
    if need_seeds:
        if args.seeds is not None:
            overrides["seeds"] = [int(s) for s in args.seeds.split(",")]
        elif args.seed is not None:
            n = args.replicas or 10
            overrides["seeds"] = list(range(args.seed, args.seed + n))
    config = load_config(args.config, overrides)
    if need_seeds and not config.seeds:
        raise ConfigError("this subcommand needs seeds (--seeds or --seed/--replicas)")
    return config


def _out_dir(args: argparse.Namespace, config: ExperimentConfig) -> Path:
    return args.out or config.output_dir or Path("tasep2-out")


def _cmd_predict(args: argparse.Namespace) -> int:
    config = _build_config(args, need_seeds=False)
    out = _out_dir(args, config)
    pred = write_prediction(config, out)
    waves = pred.solution.moving_waves
    print(f"wrote {out / 'prediction.csv'} and {out / 'prediction.json'}")
    if waves:
        for w in waves:
            print(f"  {w.kind}: xi in [{w.xi_lo:.6g}, {w.xi_hi:.6g}]")
    else:
        print("  constant solution (no waves)")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _build_config(args, need_seeds=True)
    out = _out_dir(args, config)
    profiles = write_simulation(config, out)
    n_files = sum(len(v) + 1 for v in profiles.values())
    print(f"wrote {n_files} height files to {out}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    config = _build_config(args, need_seeds=True)
    out = _out_dir(args, config)
    report = write_comparison(config, out)
    for t, err in sorted(report.errors.items()):
        line = " ".join(f"{name}: linf={err[name]['linf']:.4g}" for name in err)
        print(f"t={t:g}  {line}")
    print(f"wrote {out / 'report.json'}")
    if args.assert_linf is not None and report.max_linf > args.assert_linf:
        print(
            f"FAIL: max linf {report.max_linf:.4g} exceeds {args.assert_linf:g}",
            file=sys.stderr,
        )
        return 3
    return 0


def _cmd_ring(args: argparse.Namespace) -> int:
    try:
        alpha = Fraction(args.alpha)
        beta = Fraction(args.beta)
        mw, mb, ms = (int(v) for v in args.counts.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad ring arguments: {exc}") from exc
    counts = RingCounts(m_black=mb, m_white=mw, m_star=ms)
    cur = ring_currents(alpha, beta, counts, max_n=args.max_n)
    print(f"ring N={counts.n} counts: white={mw} black={mb} star={ms} "
          f"alpha={alpha} beta={beta}")
    for name, value in (("J_white", cur.j_white), ("J_black", cur.j_black),
                        ("J_star", cur.j_star)):
        print(f"  {name} = {value} = {float(value):.17g}")
    return 0


def _cmd_self_test(args: argparse.Namespace) -> int:
    del args
    import numpy as np

    from .kmc import init_bernoulli, measure_swap_counts, replica_rng, run_until
    from .ring import RingCounts as RC
    from .ring import ring_currents as rc
    from .state import Densities, ModelParams
    from .stationary import currents_from_z, currents_residual, densities_from_z, solve_z

    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    worst_rt = 0.0
    worst_res = 0.0
    for a, b in ((0.5, 0.5), (1.7, 2.0), (0.3, 0.2)):
        params = ModelParams(a, b)
        for rw in np.linspace(0.05, 0.85, 9):
            for rb in np.linspace(0.05, 0.85, 9):
                if rw + rb > 0.95:
                    continue
                dens = Densities(rw, rb)
                z = solve_z(params, dens)
                back = densities_from_z(params, z)
                worst_rt = max(worst_rt, abs(back.rho_white - rw), abs(back.rho_black - rb))
                res = currents_residual(params, z, currents_from_z(params, z, dens))
                worst_res = max(worst_res, abs(res[0]), abs(res[1]))
    check(f"density round trip (worst {worst_rt:.2e})", worst_rt <= 1e-10)
    check(f"current linear system (worst {worst_res:.2e})", worst_res <= 1e-10)

    cur = rc("1/2", "1/2", RC(2, 2, 2))
    check("ring currents zero sum", cur.j_white + cur.j_black + cur.j_star == 0)

    params = ModelParams(0.6, 0.8)
    from .kmc import SimConfig as SC
    cfg = SC(params=params, L=60, dens_left=Densities(0.2, 0.1),
             dens_right=Densities(0.3, 0.3), t_max=20.0, seed=7)
    runs = []
    for _ in range(2):
        rng = replica_rng(7)
        lat = init_bernoulli(cfg, rng)
        before = lat.species_counts()
        run_until(lat, params, 20.0, rng)
        runs.append((lat.sites.copy(), lat.event_count, measure_swap_counts(lat)))
        check("species conservation", before == lat.species_counts())
    check("deterministic replay", bool(np.array_equal(runs[0][0], runs[1][0]))
          and runs[0][1:] == runs[1][1:])
    return 0 if failures == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tasep2",
        description="Two-species TASEP: hydrodynamic prediction vs event-driven simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="solve the two-state problem and write profiles")
    _add_experiment_args(p, need_seeds=False)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("simulate", help="run replicas and write height profiles")
    _add_experiment_args(p, need_seeds=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="overlay empirical and predicted heights")
    _add_experiment_args(p, need_seeds=True)
    p.add_argument("--assert-linf", type=float, default=None,
                   help="exit 3 if any species max error exceeds this")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("ring-currents", help="exact currents on a finite ring")
    p.add_argument("--alpha", required=True, help="rate as p/q")
    p.add_argument("--beta", required=True, help="rate as p/q")
    p.add_argument("--counts", required=True, metavar="MW,MB,MS",
                   help="white,black,star particle counts")
    p.add_argument("--max-n", type=int, default=120)
    p.set_defaults(func=_cmd_ring)

    p = sub.add_parser("self-test", help="quick internal consistency checks")
    p.set_defaults(func=_cmd_self_test)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Tasep2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
