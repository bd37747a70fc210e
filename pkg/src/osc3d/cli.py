"""Command-line front end: grid sweeps to CSV/JSON and the ``check`` suite."""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .coherent import CoherentLabel, coherent_eval_terms, coherent_position_amplitude, evolve_coherent
from .oscillator import OscillatorParams
from .phase_space import COORDINATES, WignerGridSpec, wigner_fock, wigner_numeric
from .photon_statistics import classify_squeezing, mandel_q_closed, quadrature_variances, squeeze_border
from .special_functions import MAX_DEGREE, MAX_ORDER
from .squeezed import SqueezeLabel, squeeze_axis_params, squeezed_position_amplitude

COMMANDS = ("wigner", "evolve", "mandel", "squeeze_map", "borders", "check")
EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 2, 3

HEADERS = {
    "evolve": ("t", "rx", "ry", "rz", "px", "py", "pz", "phase"),
    "mandel": ("delta", "r", "Q"),
    "squeeze_map": ("phi", "r", "var1", "var2", "squeezed"),
    "borders": ("phi", "r_plus", "r_minus"),
}

DEFAULT_GRIDS = {
    "wigner": ["x:-3:3:41", "px:-3:3:41"],
    "evolve": ["t:0:2pi:33"],
    "mandel": ["delta:0:pi:31", "r:0:2:41"],
    "squeeze_map": ["phi:0:2pi:73", "r:-2:2:41"],
    "borders": ["phi:0:2pi:73"],
}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


_PI_TERM = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_number(text: str) -> float:
    """Float literal or a multiple of pi such as ``2pi``, ``-pi/2``, ``0.5*pi``."""
    text = str(text).strip()
    match = _PI_TERM.match(text)
    if match:
        coef, div = match.groups()
        scale = float(coef + "1" if coef in ("", "+", "-") else coef)
        return scale * math.pi / (float(div) if div else 1.0)
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def parse_complex_triple(text: str) -> list[complex]:
    """``re+imi;re+imi;re+imi`` into three complex numbers."""
    parts = [p.strip() for p in str(text).split(";")]
    if len(parts) != 3:
        raise ConfigError(f"expected three ';'-separated components, got {text!r}")
    out = []
    for part in parts:
        try:
            out.append(complex(part.replace("i", "j").replace(" ", "")))
        except ValueError:
            raise ConfigError(f"bad complex component {part!r}") from None
    return out


@dataclass(frozen=True)
class GridAxis:
    name: str
    lo: float
    hi: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        parts = str(text).split(":")
        if len(parts) != 4:
            raise ConfigError(f"grid must be axis:min:max:count, got {text!r}")
        name, lo, hi, count = parts
        try:
            n = int(count)
        except ValueError:
            raise ConfigError(f"grid count must be an integer, got {count!r}") from None
        axis = cls(name.strip(), parse_number(lo), parse_number(hi), n)
        if axis.count < 2:
            raise ConfigError(f"grid {name!r} needs at least 2 points")
        if not axis.lo < axis.hi:
            raise ConfigError(f"grid {name!r} needs min < max")
        return axis

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def spec(self) -> str:
        return f"{self.name}:{self.lo!r}:{self.hi!r}:{self.count}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    state: str = "fock:0,0,0"
    alpha: str = "0+0i;0+0i;0+0i"
    squeeze: str = "0+0i;0+0i;0+0i"
    alpha_mag: float = 0.0
    grid: tuple[str, ...] = ()
    fixed: tuple[str, ...] = ()
    cutoff: int | None = None
    order: int | None = None
    params: str = "1,1,1"
    out: str | None = None
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.order is not None and not 1 <= self.order <= MAX_ORDER:
            raise ConfigError(f"order must be in [1, {MAX_ORDER}]")
        if self.cutoff is not None and not 1 <= self.cutoff <= MAX_DEGREE:
            raise ConfigError(f"cutoff must be in [1, {MAX_DEGREE}]")
        self.oscillator()
        self.grid_axes()
        return self

    def oscillator(self) -> OscillatorParams:
        parts = str(self.params).split(",")
        if len(parts) != 3:
            raise ConfigError("params must be M,omega,hbar")
        try:
            return OscillatorParams(*(parse_number(p) for p in parts))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def grid_axes(self) -> list[GridAxis]:
        if self.command == "check":
            return []
        axes = [GridAxis.parse(g) for g in (self.grid or DEFAULT_GRIDS[self.command])]
        expected = {
            "evolve": [("t",)],
            "mandel": [("delta",), ("r",)],
            "squeeze_map": [("phi",), ("r",)],
            "borders": [("phi",)],
            "wigner": [COORDINATES, COORDINATES],
        }[self.command]
        if len(axes) != len(expected):
            raise ConfigError(f"{self.command} takes {len(expected)} grid axes, got {len(axes)}")
        for axis, allowed in zip(axes, expected):
            if axis.name not in allowed:
                raise ConfigError(f"{self.command} grid axis {axis.name!r} not in {allowed}")
        return axes

    def fixed_coordinates(self) -> dict[str, float]:
        out = {}
        for item in self.fixed:
            name, _, value = str(item).partition("=")
            out[name.strip()] = parse_number(value)
        return out


def _worker_count() -> int:
    raw = os.environ.get("OSC3D_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"OSC3D_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("OSC3D_THREADS must be >= 1")
    return n


def _parallel_map(func, items) -> list:
    items = list(items)
    workers = min(_worker_count(), max(1, len(items)))
    if workers == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves input order whatever the completion order
        return list(pool.map(func, items))


def _parse_state(config: RunConfig):
    kind, _, rest = config.state.partition(":")
    if kind == "fock":
        try:
            index = tuple(int(v) for v in rest.split(","))
        except ValueError:
            raise ConfigError(f"bad fock index {rest!r}") from None
        if len(index) != 3 or min(index) < 0:
            raise ConfigError("fock index needs three non-negative integers")
        return "fock", index
    if kind == "coherent":
        return "coherent", CoherentLabel(parse_complex_triple(config.alpha))
    if kind == "squeezed":
        return "squeezed", SqueezeLabel(parse_complex_triple(config.squeeze), parse_complex_triple(config.alpha))
    raise ConfigError(f"state must be fock:m,n,l, coherent or squeezed, got {config.state!r}")


def _rows_wigner(config: RunConfig):
    params = config.oscillator()
    kind, state = _parse_state(config)
    (a, b) = config.grid_axes()
    fixed = config.fixed_coordinates()
    try:
        spec = WignerGridSpec((a.name, b.name), ((a.lo, a.hi, a.count), (b.lo, b.hi, b.count)), fixed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    order = config.order or 60
    if kind == "fock":
        def value(pt):
            return float(wigner_fock(state, pt, params))
    else:
        if kind == "coherent":
            width = np.ones(3)
            def psi(r):
                return coherent_position_amplitude(state, r, 0.0, params)
        else:
            width = np.array([(1.0 / (ax.g_iota * ax.c_iota**2)).real for ax in map(squeeze_axis_params, state.s)])
            def psi(r):
                return squeezed_position_amplitude(state, r, params)

        def value(pt):
            return float(wigner_numeric(psi, pt, params, order=order, width=width))
    points = list(spec.points())
    values = _parallel_map(lambda item: value(item[2]), points)
    header = (a.name, b.name, "W")
    return header, [(pa, pb, w) for (pa, pb, _), w in zip(points, values)]


def _rows_evolve(config: RunConfig):
    params = config.oscillator()
    kind, state = _parse_state(config)
    if kind != "coherent":
        raise ConfigError("evolve needs --state coherent")
    (axis,) = config.grid_axes()

    def row(t):
        terms = coherent_eval_terms(state, t, params)
        _, phase = evolve_coherent(state, t, params)
        return (float(t), *map(float, terms.r_bar), *map(float, terms.p_bar), float(phase))

    return HEADERS["evolve"], _parallel_map(row, axis.values())


def _rows_mandel(config: RunConfig):
    deltas, radii = (ax.values() for ax in config.grid_axes())
    alpha_sq = float(config.alpha_mag) ** 2

    def row(item):
        delta, r = item
        return (float(delta), float(r), mandel_q_closed(abs(r), alpha_sq, delta))

    return HEADERS["mandel"], _parallel_map(row, [(d, r) for d in deltas for r in radii])


def _rows_squeeze_map(config: RunConfig):
    phis, radii = (ax.values() for ax in config.grid_axes())

    def row(item):
        phi, r = item
        v1, v2 = quadrature_variances(r, phi)
        return (float(phi), float(r), v1, v2, classify_squeezing(v1, v2))

    return HEADERS["squeeze_map"], _parallel_map(row, [(p, r) for p in phis for r in radii])


def _rows_borders(config: RunConfig):
    (axis,) = config.grid_axes()
    return HEADERS["borders"], _parallel_map(lambda phi: (float(phi), *squeeze_border(phi)), axis.values())


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    # adding 0.0 folds -0.0 into 0.0
    return repr(float(value) + 0.0)


def render(config: RunConfig, header, rows) -> str:
    if config.format == "csv":
        lines = [",".join(header)] + [",".join(_cell(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    meta = {k: v for k, v in asdict(config).items() if k not in ("out", "format")}
    meta["grid"] = [ax.spec() for ax in config.grid_axes()]
    meta["version"] = __version__
    records = [
        {h: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v) + 0.0) for h, v in zip(header, row)}
        for row in rows
    ]
    return json.dumps({"meta": meta, "rows": records}, indent=1) + "\n"


def compute(config: RunConfig) -> str:
    builders = {
        "wigner": _rows_wigner,
        "evolve": _rows_evolve,
        "mandel": _rows_mandel,
        "squeeze_map": _rows_squeeze_map,
        "borders": _rows_borders,
    }
    header, rows = builders[config.command](config)
    return render(config, header, rows)


def _determinism_result():
    from .checks import CheckResult

    cfg = RunConfig("squeeze_map", grid=("phi:0:2pi:37", "r:-2:2:21"))
    saved = os.environ.get("OSC3D_THREADS")
    outputs = []
    try:
        for workers in ("1", "4"):
            os.environ["OSC3D_THREADS"] = workers
            outputs.append(compute(cfg))
    finally:
        if saved is None:
            os.environ.pop("OSC3D_THREADS", None)
        else:
            os.environ["OSC3D_THREADS"] = saved
    same = outputs[0] == outputs[1]
    return CheckResult("10 byte-identical output for 1 and 4 workers", same, [f"identical={same}"])


def run_check(config: RunConfig, stream) -> int:
    from . import checks

    round_trip_kwargs = {}
    if config.cutoff is not None:
        round_trip_kwargs["cutoff"] = config.cutoff
    if config.order is not None:
        round_trip_kwargs["order"] = config.order
    results = []
    for check in checks.ALL_CHECKS:
        result = check(**round_trip_kwargs) if check is checks.check_round_trip else check()
        print(result.line(), file=stream, flush=True)
        results.append(result)
    results.append(_determinism_result())
    print(results[-1].line(), file=stream, flush=True)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed", file=stream)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write("criterion,passed,details\n")
            for r in results:
                fh.write(f"{r.name!r},{str(r.passed).lower()},{'; '.join(r.details)!r}\n")
    return EXIT_CHECK if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osc3d", description="3D harmonic oscillator phase-space and photon-statistics sweeps.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file of option values; flags override it")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--state", help="fock:m,n,l | coherent | squeezed")
    parser.add_argument("--alpha", help="displacement as 're+imi;re+imi;re+imi'")
    parser.add_argument("--squeeze", help="squeeze parameter as 're+imi;re+imi;re+imi'")
    parser.add_argument("--alpha-mag", type=float, dest="alpha_mag", help="|alpha| for the mandel sweep")
    parser.add_argument("--grid", action="append", help="axis:min:max:count, repeatable; min/max accept pi multiples")
    parser.add_argument("--fixed", action="append", help="name=value for a fixed wigner coordinate, repeatable")
    parser.add_argument("--cutoff", type=int, help="Fock cutoff (check: round-trip cutoff)")
    parser.add_argument("--order", type=int, help="quadrature order")
    parser.add_argument("--params", help="M,omega,hbar")
    return parser


def load_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        values.pop("command", None)
    for key, value in vars(args).items():
        if key not in ("config", "command") and value is not None:
            values[key] = value
    known = set(RunConfig.__dataclass_fields__) - {"command"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("grid", "fixed"):
        if key in values:
            values[key] = tuple([values[key]] if isinstance(values[key], str) else values[key])
    return RunConfig(args.command, **values).validate()


def main(argv=None) -> int:
    try:
        config = load_config(argv)
        if config.command == "check":
            return run_check(config, sys.stdout)
        text = compute(config)
    except ConfigError as exc:
        print(f"osc3d: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
