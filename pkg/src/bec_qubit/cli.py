"""Command-line front end.

Scenarios are described by flat ``key = value`` files whose keys are the
:class:`ScenarioConfig` field names; ``--set key=value`` overrides them.

Exit codes: 0 success, 1 configuration error, 2 parameter validation error,
3 numerical non-convergence (or an oracle deviation above threshold).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import csvio, svg
from .asymptotics import stationary_phase_series, steady_state, validity_time
from .continuum import continuum_series, static_qubit_series
from .core import (
    ContinuumParams,
    ConvergenceError,
    DensityMatrix2,
    FiniteModelParams,
    ModelTag,
    ParameterError,
    QubitAmplitudes,
    TimeSeries,
    time_grid,
)
from .finite import finite_series, oracle_series, pn_distribution, pn_poisson_limit

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_PARAM, EXIT_NUMERIC = 0, 1, 2, 3

FINITE_MODELS = ("finite_n", "oracle")
CONTINUUM_MODELS = ("continuum", "stationary_phase", "static_closed_form", "steady_state")
MODELS = FINITE_MODELS + CONTINUUM_MODELS
FINITE_KEYS = ("n_atoms", "omega_hop", "delta_omega")
CONTINUUM_KEYS = ("alpha",)


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    a_re: float = 1.0
    a_im: float = 0.0
    b_re: float = 0.0
    b_im: float = 0.0
    omega0: float = 1.0
    alpha: float | None = None
    n_atoms: int | None = None
    omega_hop: float | None = None
    delta_omega: float | None = None
    t_max: float = 25.0
    n_samples: int = 251
    tol: float = 1e-8
    csv_path: str | None = None
    svg_path: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        finite_set = [k for k in FINITE_KEYS if getattr(self, k) is not None]
        continuum_set = [k for k in CONTINUUM_KEYS if getattr(self, k) is not None]
        if self.model in FINITE_MODELS:
            if continuum_set:
                raise ConfigError(f"model {self.model} takes finite parameters, got {continuum_set}")
            missing = [k for k in ("n_atoms", "delta_omega") if getattr(self, k) is None]
            if missing:
                raise ConfigError(f"model {self.model} requires {missing}")
        else:
            if finite_set:
                raise ConfigError(f"model {self.model} takes continuum parameters, got {finite_set}")
            if self.alpha is None:
                raise ConfigError(f"model {self.model} requires alpha")
        if not self.t_max > 0:
            raise ConfigError("t_max must be > 0")
        if self.n_samples < 2:
            raise ConfigError("n_samples must be >= 2")

    @property
    def qubit(self) -> QubitAmplitudes:
        return QubitAmplitudes(complex(self.a_re, self.a_im), complex(self.b_re, self.b_im))

    @property
    def is_finite(self) -> bool:
        return self.model in FINITE_MODELS

    def finite_params(self) -> FiniteModelParams:
        hop = 1.0 if self.omega_hop is None else self.omega_hop
        return FiniteModelParams(self.n_atoms, hop, self.delta_omega, self.omega0)

    def continuum_params(self) -> ContinuumParams:
        return ContinuumParams(self.alpha, self.omega0)

    def grid(self) -> np.ndarray:
        return time_grid(self.t_max, self.n_samples)


_FIELD_TYPES = {
    f.name: (str if f.name in ("model", "csv_path", "svg_path") else int if f.name in ("n_atoms", "n_samples") else float)
    for f in fields(ScenarioConfig)
}
NUMERIC_KEYS = tuple(k for k, kind in _FIELD_TYPES.items() if kind is not str)


def _convert(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if raw.lower() in ("", "none"):
        return None
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_assignments(lines, source: str = "<config>") -> dict:
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, raw = line.split("=", 1)
        key = key.strip()
        values[key] = _convert(key, raw)
    return values


def load_config(path: str | None, overrides=()) -> ScenarioConfig:
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values.update(parse_assignments(text.splitlines(), path))
    values.update(parse_assignments(overrides, "--set"))
    return config_from_mapping(values)


def config_from_mapping(values: dict) -> ScenarioConfig:
    if "model" not in values or values["model"] is None:
        raise ConfigError("config must set model")
    clean = {k: v for k, v in values.items() if v is not None}
    try:
        return ScenarioConfig(**clean)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def model_series(config: ScenarioConfig, times) -> TimeSeries:
    """Evaluate the configured model on ``times``."""
    q0 = config.qubit
    times = np.asarray(times, dtype=float)
    if config.model == "finite_n":
        return finite_series(times, config.finite_params(), q0)
    if config.model == "oracle":
        return oracle_series(times, config.finite_params(), q0)
    params = config.continuum_params()
    if config.model == "continuum":
        return continuum_series(times, params, q0, config.tol)
    if config.model == "static_closed_form":
        return static_qubit_series(times, params, q0)
    if config.model == "stationary_phase":
        if params.omega0 <= 0:
            raise ParameterError("stationary_phase needs omega0 > 0")
        inside = times[times > 3.0 * validity_time(params)]
        if inside.size == 0:
            raise ParameterError("no grid point inside the stationary-phase window")
        return stationary_phase_series(inside, params, q0)
    st = steady_state(params, q0)
    return TimeSeries(ModelTag.CLOSED_FORM, (math.inf,), (st.as_density(),))


def run_scenario(config: ScenarioConfig) -> TimeSeries:
    """Run one scenario and write its CSV (and SVG when configured)."""
    logger.info("running %s on %d samples", config.model, config.n_samples)
    series = model_series(config, [math.inf] if config.model == "steady_state" else config.grid())
    if config.csv_path:
        csvio.write_series(series, config.csv_path)
    if config.svg_path and config.model != "steady_state":
        chart = svg.Chart(f"{config.model}", "t", "density matrix element")
        chart.add("s11", series.t, series.s11)
        chart.add("|s12|", series.t, np.abs(series.s12))
        svg.write(chart, config.svg_path)
    return series


def _labels(configs) -> list[str]:
    seen: dict[str, int] = {}
    labels = []
    for c in configs:
        seen[c.model] = seen.get(c.model, 0) + 1
        labels.append(c.model if seen[c.model] == 1 else f"{c.model}_{seen[c.model]}")
    return labels


def run_comparison(configs: list[ScenarioConfig], out_dir, jobs: int = 1) -> dict[str, TimeSeries]:
    """Overlay several models on one grid: CSV per model plus s11 and |s12| charts."""
    if not configs:
        raise ConfigError("compare needs at least one config")
    ref = configs[0]
    for c in configs[1:]:
        if (c.t_max, c.n_samples) != (ref.t_max, ref.n_samples):
            raise ConfigError("compare requires all configs to share t_max and n_samples")
        if c.qubit != ref.qubit:
            raise ConfigError("compare requires all configs to share the qubit state")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels = _labels(configs)
    grid = ref.grid()
    timed = [c for c in configs if c.model != "steady_state"]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda c: model_series(c, grid), timed))
    series = dict(zip([lab for lab, c in zip(labels, configs) if c.model != "steady_state"], results))
    for label, s in series.items():
        csvio.write_series(s, out / f"{label}.csv")
    for label, c in zip(labels, configs):
        if c.model == "steady_state":
            csvio.write_series(model_series(c, [math.inf]), out / f"{label}.csv")
    anchor = next((c for c in configs if c.model in CONTINUUM_MODELS), None)
    asymptote = steady_state(anchor.continuum_params(), anchor.qubit) if anchor else None
    charts = {
        "s11": svg.Chart("s11 vs t", "t", "s11"),
        "s12": svg.Chart("|s12| vs t", "t", "|s12|"),
    }
    for label, s in series.items():
        charts["s11"].add(label, s.t, s.s11)
        charts["s12"].add(label, s.t, np.abs(s.s12))
    if asymptote is not None:
        charts["s11"].hlines.append(("steady state", asymptote.s11_st))
        charts["s12"].hlines.append(("steady state", abs(asymptote.s12_st)))
    for name, chart in charts.items():
        svg.write(chart, out / f"{name}.svg")
    return series


SWEEP_HEADER = ("value", "t", "s11", "s12_re", "s12_im", "purity")


def _evaluate_point(config: ScenarioConfig, t: float) -> tuple[float, DensityMatrix2]:
    if config.model == "steady_state":
        t = math.inf
    s = model_series(config, [t])
    return s.times[0], s.states[0]


def run_sweep(base: ScenarioConfig, axis: str, values, jobs: int = 1) -> list[list[str]]:
    """Evaluate the model at t_max (or at t=value for axis 't') for each value."""
    if axis != "t" and axis not in NUMERIC_KEYS:
        raise ConfigError(f"unknown sweep axis {axis!r}")

    def point(value):
        if axis == "t":
            return _evaluate_point(base, value)
        changed = dataclasses.replace(base, **{axis: _FIELD_TYPES[axis](value)})
        return _evaluate_point(changed, changed.t_max)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(point, values))
    return [[csvio.fmt(v)] + csvio.density_row(t, rho) for v, (t, rho) in zip(values, results)]


def _emit(header, rows, path) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            csvio.write_rows(fh, header, rows)
    else:
        csvio.write_rows(sys.stdout, header, rows)


def _parse_floats(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad number list {text!r}") from None


def cmd_evolve(args) -> int:
    overrides = list(args.set or [])
    if args.csv:
        overrides.append(f"csv_path={args.csv}")
    if args.svg:
        overrides.append(f"svg_path={args.svg}")
    config = load_config(args.config, overrides)
    series = run_scenario(config)
    if not config.csv_path:
        sys.stdout.write(csvio.series_to_csv(series))
    return EXIT_OK


def cmd_steady(args) -> int:
    config = load_config(args.config, list(args.set or []) + ["model=steady_state"])
    series = model_series(config, [math.inf])
    _emit(csvio.HEADER, [csvio.density_row(t, r) for t, r in series], args.csv)
    return EXIT_OK


def cmd_compare(args) -> int:
    configs = [load_config(path, args.set or []) for path in args.configs]
    run_comparison(configs, args.out_dir, args.jobs)
    print(f"wrote {len(configs)} model(s) to {args.out_dir}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = load_config(args.config, args.set or [])
    if args.logspace:
        parts = _parse_floats(args.logspace)
        if len(parts) != 3:
            raise ConfigError("--logspace expects start,stop,num")
        values = list(np.geomspace(parts[0], parts[1], int(parts[2])))
    else:
        values = _parse_floats(args.values or "")
    rows = run_sweep(base, args.axis, values, args.jobs)
    _emit(SWEEP_HEADER, rows, args.csv)
    return EXIT_OK


def cmd_pn_dist(args) -> int:
    params = FiniteModelParams(args.n_atoms, args.omega_hop, args.delta_omega, 0.0)
    probs = pn_distribution(args.t, params, args.dot)
    header = ["n", "p_n"]
    if args.kappa is not None:
        header.append("poisson")
        poisson = pn_poisson_limit(np.arange(params.n_atoms + 1), args.kappa, args.t)
    rows = []
    for n, p in enumerate(probs):
        row = [str(n), csvio.fmt(p)]
        if args.kappa is not None:
            row.append(csvio.fmt(poisson[n]))
        rows.append(row)
    _emit(header, rows, args.csv)
    return EXIT_OK


def cmd_oracle(args) -> int:
    config = load_config(args.config, list(args.set or []) + ["model=finite_n"])
    params = config.finite_params()
    grid = config.grid()
    fast = finite_series(grid, params, config.qubit)
    slow = oracle_series(grid, params, config.qubit)
    d11 = max(abs(a.s11 - b.s11) for a, b in zip(fast.states, slow.states))
    d12 = max(abs(a.s12 - b.s12) for a, b in zip(fast.states, slow.states))
    worst = max(d11, d12)
    print(f"n_atoms={params.n_atoms} samples={len(grid)} t_max={config.t_max:g}")
    print(f"max_abs_dev_s11={d11:.3e}")
    print(f"max_abs_dev_s12={d12:.3e}")
    ok = worst <= args.threshold
    print(f"{'PASS' if ok else 'FAIL'} threshold={args.threshold:.1e}")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bec-qubit",
        description="Qubit decoherence under continuous measurement by a double-well condensate",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p, config_required=False):
        p.add_argument("--config", "-c", required=config_required, help="key = value scenario file")
        p.add_argument("--set", "-s", action="append", metavar="KEY=VALUE", help="override a config key")

    p = sub.add_parser("evolve", help="time series of one model")
    scenario_args(p)
    p.add_argument("--csv", help="output CSV (default stdout)")
    p.add_argument("--svg", help="output SVG chart")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("steady", help="long-time steady state")
    scenario_args(p)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("compare", help="overlay several models on one grid")
    p.add_argument("configs", nargs="+", help="scenario files sharing grid and qubit state")
    p.add_argument("--set", "-s", action="append", metavar="KEY=VALUE", help="override applied to every config")
    p.add_argument("--out-dir", "-o", required=True)
    p.add_argument("--jobs", "-j", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="evaluate a model across values of one parameter")
    scenario_args(p)
    p.add_argument("--axis", required=True, help="config key to vary, or 't'")
    p.add_argument("--values", help="comma separated values")
    p.add_argument("--logspace", help="start,stop,num (log-spaced values)")
    p.add_argument("--csv")
    p.add_argument("--jobs", "-j", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pn-dist", help="atom-number distribution for a static qubit")
    p.add_argument("--n-atoms", type=int, required=True)
    p.add_argument("--omega-hop", type=float, default=1.0)
    p.add_argument("--delta-omega", type=float, default=0.0)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dot", type=int, choices=(1, 2), default=1)
    p.add_argument("--kappa", type=float, help="also emit the short-time Poisson limit")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_pn_dist)

    p = sub.add_parser("oracle", help="spectral sum vs full Hamiltonian at small N")
    scenario_args(p)
    p.add_argument("--threshold", type=float, default=1e-10)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # reader closed early, e.g. output piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
