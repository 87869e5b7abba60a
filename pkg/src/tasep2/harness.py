"""Experiment orchestration: predict profiles, run replicas, compare.

An experiment is described by one JSON document (densities on the two
sides of the wall, rates, lattice half-width, horizon, seeds).  All
outputs are deterministic functions of that document: CSV files are
written with 17 significant digits and replica results are merged in
seed order, so reruns are byte-identical.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .heights import HeightProfile, mean_profile, profile_errors
from .kmc import SimConfig, init_bernoulli, measure_heights, replica_rng, run_until
from .state import Densities, ModelParams
from .waves import RiemannSolution, height_profile, profile_at, riemann_solve

#: environment variable holding the replica thread count
THREADS_ENV = "TASEP2_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    dens_left: Densities
    dens_right: Densities
    L: int = 600
    t_max: float = 500.0
    seeds: tuple[int, ...] = ()
    measurement_times: tuple[float, ...] = ()
    n_xi: int = 1001
    output_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.L < 1:
            raise ConfigError(f"L must be a positive integer, got {self.L!r}")
        if self.t_max <= 0:
            raise ConfigError(f"t_max must be positive, got {self.t_max!r}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        times = tuple(sorted(self.measurement_times)) or (self.t_max,)
        object.__setattr__(self, "measurement_times", times)
        if times[0] <= 0 or times[-1] > self.t_max:
            raise ConfigError("measurement times must lie in (0, t_max]")
        if self.n_xi < 2:
            raise ConfigError("n_xi must be at least 2")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        def need(key: str):
            if key not in doc:
                raise ConfigError(f"missing config field {key!r}")
            return doc[key]

        def dens(key: str) -> Densities:
            raw = need(key)
            try:
                return Densities(rho_white=float(raw["white"]), rho_black=float(raw["black"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad {key!r}: expected {{'white': w, 'black': b}}") from exc

        known = {
            "alpha", "beta", "rho_left", "rho_right", "L", "t_max",
            "seeds", "measurement_times", "n_xi", "output_dir",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            params = ModelParams(alpha=float(need("alpha")), beta=float(need("beta")))
        except (TypeError, ValueError) as exc:
            raise ConfigError("alpha and beta must be numbers") from exc
        return cls(
            params=params,
            dens_left=dens("rho_left"),
            dens_right=dens("rho_right"),
            L=int(doc.get("L", 600)),
            t_max=float(doc.get("t_max", 500.0)),
            seeds=tuple(int(s) for s in doc.get("seeds", ())),
            measurement_times=tuple(float(t) for t in doc.get("measurement_times", ())),
            n_xi=int(doc.get("n_xi", 1001)),
            output_dir=Path(doc["output_dir"]) if doc.get("output_dir") else None,
        )

    def to_dict(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "rho_left": {"white": self.dens_left.rho_white, "black": self.dens_left.rho_black},
            "rho_right": {"white": self.dens_right.rho_white, "black": self.dens_right.rho_black},
            "L": self.L,
            "t_max": self.t_max,
            "seeds": list(self.seeds),
            "measurement_times": list(self.measurement_times),
            "n_xi": self.n_xi,
        }

    def sim_config(self, seed: int) -> SimConfig:
        return SimConfig(
            params=self.params,
            L=self.L,
            dens_left=self.dens_left,
            dens_right=self.dens_right,
            t_max=self.t_max,
            seed=seed,
            measurement_times=self.measurement_times,
        )


def load_config(path: str | Path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a config JSON file and apply CLI-style overrides."""
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config root must be an object, got {type(doc).__name__}")
    doc.update(overrides or {})
    return ExperimentConfig.from_dict(doc)


def format_value(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: Path, columns: dict[str, np.ndarray]) -> None:
    """Write columns with 17 significant digits for byte-stable diffs."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = len(arrays[0])
    lines = [",".join(names)]
    for i in range(length):
        lines.append(",".join(format_value(float(a[i])) for a in arrays))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def read_csv(path: Path) -> dict[str, np.ndarray]:
    lines = Path(path).read_text().strip().split("\n")
    names = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return {n: data[:, i] for i, n in enumerate(names)}


@dataclass(frozen=True)
class PredictionResult:
    solution: RiemannSolution
    u: np.ndarray
    rho: dict[str, np.ndarray]
    heights: HeightProfile


def run_predict(config: ExperimentConfig) -> PredictionResult:
    """Hydrodynamic densities and heights on a uniform grid in [-1, 1]."""
    sol = riemann_solve(config.params, config.dens_left, config.dens_right)
    u = np.linspace(-1.0, 1.0, config.n_xi)
    rho = {"white": np.empty_like(u), "black": np.empty_like(u), "star": np.empty_like(u)}
    for i, xi in enumerate(u):
        d = profile_at(sol, float(xi))
        rho["white"][i] = d.rho_white
        rho["black"][i] = d.rho_black
        rho["star"][i] = d.rho_star
    return PredictionResult(solution=sol, u=u, rho=rho, heights=height_profile(sol, u))


def write_prediction(config: ExperimentConfig, out_dir: Path) -> PredictionResult:
    pred = run_predict(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / "prediction.csv",
        {
            "xi": pred.u,
            "rho_white": pred.rho["white"],
            "rho_black": pred.rho["black"],
            "rho_star": pred.rho["star"],
            "h_white": pred.heights.h_white,
            "h_black": pred.heights.h_black,
            "h_star": pred.heights.h_star,
        },
    )
    doc = {"config": config.to_dict(), "solution": pred.solution.to_dict()}
    (out_dir / "prediction.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return pred


def _simulate_one(config: ExperimentConfig, seed: int) -> dict[float, HeightProfile]:
    rng = replica_rng(seed)
    lattice = init_bernoulli(config.sim_config(seed), rng)
    out: dict[float, HeightProfile] = {}
    for t in config.measurement_times:
        run_until(lattice, config.params, t, rng)
        out[t] = measure_heights(lattice)
    return out


def run_simulate(config: ExperimentConfig) -> dict[float, list[HeightProfile]]:
    """Replica height profiles at every measurement time, in seed order."""
    if not config.seeds:
        raise ConfigError("simulate needs at least one seed")
    n_threads = int(os.environ.get(THREADS_ENV, "1") or "1")
    if n_threads > 1 and len(config.seeds) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(lambda s: _simulate_one(config, s), config.seeds))
    else:
        results = [_simulate_one(config, s) for s in config.seeds]
    return {
        t: [res[t] for res in results] for t in config.measurement_times
    }


def write_simulation(
    config: ExperimentConfig, out_dir: Path
) -> dict[float, list[HeightProfile]]:
    profiles = run_simulate(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    for t, per_seed in profiles.items():
        for seed, prof in zip(config.seeds, per_seed):
            write_csv(
                out_dir / f"heights_t{t:g}_seed{seed}.csv",
                {"u": prof.u, "h_white": prof.h_white, "h_black": prof.h_black,
                 "h_star": prof.h_star},
            )
        mean = mean_profile(per_seed)
        write_csv(
            out_dir / f"heights_t{t:g}_mean.csv",
            {"u": mean.u, "h_white": mean.h_white, "h_black": mean.h_black,
             "h_star": mean.h_star},
        )
    return profiles


@dataclass(frozen=True)
class ComparisonReport:
    """Grid-aligned errors between empirical means and the prediction."""

    config: ExperimentConfig
    solution: RiemannSolution
    errors: dict[float, dict]
    per_seed_linf: dict[float, list[dict]] = field(default_factory=dict)

    @property
    def max_linf(self) -> float:
        return max(
            err[name]["linf"] for err in self.errors.values() for name in err
        )

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "solution": self.solution.to_dict(),
            "comparison": {
                f"{t:g}": {
                    "errors": self.errors[t],
                    "per_seed_linf": self.per_seed_linf.get(t, []),
                }
                for t in self.errors
            },
            "max_linf": self.max_linf,
        }


def run_compare(
    config: ExperimentConfig,
    simulated: dict[float, list[HeightProfile]] | None = None,
) -> tuple[ComparisonReport, dict[float, tuple[HeightProfile, HeightProfile]]]:
    """Compare seed-averaged empirical heights with the prediction.

    Returns the report plus, per measurement time, the (predicted,
    empirical-mean) profile pair on the shared grid.
    """
    sol = riemann_solve(config.params, config.dens_left, config.dens_right)
    if simulated is None:
        simulated = run_simulate(config)
    errors: dict[float, dict] = {}
    per_seed: dict[float, list[dict]] = {}
    overlays: dict[float, tuple[HeightProfile, HeightProfile]] = {}
    for t, per_seed_profiles in simulated.items():
        emp = mean_profile(per_seed_profiles)
        pred = height_profile(sol, emp.u)
        errors[t] = profile_errors(pred, emp)
        per_seed[t] = [
            {name: profile_errors(pred, p)[name]["linf"] for name in ("white", "black", "star")}
            for p in per_seed_profiles
        ]
        overlays[t] = (pred, emp)
    report = ComparisonReport(
        config=config, solution=sol, errors=errors, per_seed_linf=per_seed
    )
    return report, overlays


def write_comparison(
    config: ExperimentConfig,
    out_dir: Path,
    simulated: dict[float, list[HeightProfile]] | None = None,
) -> ComparisonReport:
    report, overlays = run_compare(config, simulated)
    out_dir.mkdir(parents=True, exist_ok=True)
    for t, (pred, emp) in overlays.items():
        write_csv(
            out_dir / f"overlay_t{t:g}.csv",
            {
                "u": pred.u,
                "h_white_pred": pred.h_white,
                "h_black_pred": pred.h_black,
                "h_star_pred": pred.h_star,
                "h_white_emp": emp.h_white,
                "h_black_emp": emp.h_black,
                "h_star_emp": emp.h_star,
            },
        )
    (out_dir / "report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    return report
