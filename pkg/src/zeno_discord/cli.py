"""``zeno-discord`` command-line front end.

Value precedence: command-line flags, then the ``--config``/``--preset`` JSON
file, then built-in defaults. Rows are computed (optionally in worker
processes) and written by a single writer in grid order, so output bytes do
not depend on the thread count.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Any, Callable

import numpy as np

from . import selfcheck
from .correlations import Side, discord
from .dynamics import Family, InitialState, Partition, partition_state
from .errors import DomainError, NegativeRate, QuadratureFailure, ZenoDiscordError
from .nonhermitian import PrecisionModel, discord_under_measurement, occupation_probs
from .spinboson import SpinBosonParams, crossover_time, gamma_rate, kernel_time, survival_from_rate

EXIT_OK, EXIT_VALIDATE, EXIT_PARAMS, EXIT_NUMERIC = 0, 1, 2, 3
THREADS_ENV = "ZENO_DISCORD_THREADS"
COMMON_KEYS = ("out", "format", "threads")


class UsageError(Exception):
    """Invalid parameters; maps to exit code 2."""


@dataclass(frozen=True)
class Option:
    name: str
    kind: Callable[[Any], Any]
    default: Any
    help: str = ""


def _text(value) -> str:
    return str(value)


_SPIN_BOSON = [
    Option("delta", float, math.sqrt(2.0), "tunnelling amplitude"),
    Option("eta", float, 0.05, "ohmic coupling strength"),
    Option("omega-c", float, 1.0, "bath cutoff frequency"),
    Option("beta", float, math.inf, "inverse temperature (inf = zero temperature)"),
]

OPTIONS: dict[str, list[Option]] = {
    "gamma": [
        Option("tau-min", float, 0.0),
        Option("tau-max", float, 10.0),
        Option("tau-steps", int, 501),
        *_SPIN_BOSON,
        Option("bias", float, 0.0, "level bias"),
    ],
    "crossover": [*_SPIN_BOSON, Option("bias", float, 0.0, "level bias")],
    "sweep": [
        Option("family", _text, "phi", "initial state: phi (a|00>+b|11>) or psi (c|01>+d|10>)"),
        Option("amp", float, math.sqrt(0.2), "amplitude a (phi) or c (psi)"),
        Option("amp-min", float, 0.1),
        Option("amp-max", float, 0.9),
        Option("amp-steps", int, 1, "values >= 2 sweep the amplitude as an outer axis"),
        Option("tau-min", float, 0.0),
        Option("tau-max", float, 4.5),
        Option("tau-steps", int, 91),
        Option("delta", float, 0.6, "tunnelling amplitude"),
        *_SPIN_BOSON[1:],
        Option("bias1", float, 0.65, "bias of qubit 1"),
        Option("bias2", float, 0.65, "bias of qubit 2"),
        Option("side", _text, "A", "measured qubit for discord (A or B)"),
    ],
    "nh-sweep": [
        Option("family", _text, "phi"),
        Option("amp", float, 0.7),
        Option("r-min", float, 0.05),
        Option("r-max", float, 0.6),
        Option("r-steps", int, 41),
        Option("t-min", float, 0.0, "normalized time (fraction of tau)"),
        Option("t-max", float, 1.0),
        Option("t-steps", int, 41),
        Option("v0", float, 1.0, "drive amplitude"),
        Option("delta-e", float, 1.0, "level splitting"),
        Option("tau", float, 2.0 * math.pi, "measurement duration"),
        Option("mode", _text, "propagator", "occupation formulas: propagator or printed"),
        Option("side", _text, "A"),
    ],
    "validate": [],
}


# ---------------------------------------------------------------- formatting


def format_number(x) -> str:
    """9 significant digits; empty for missing or non-finite values."""
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return ""
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".9g")


def _cell(x) -> str:
    return x if isinstance(x, str) else format_number(x)


def _json_value(x):
    if isinstance(x, str) or x is None:
        return x
    text = format_number(x)
    return float(text) if text else None


def _json_param(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def render(columns: list[str], rows: list[list], fmt: str, params: dict) -> str:
    if fmt == "json":
        doc = {
            "params": {k: _json_param(v) for k, v in params.items()},
            "rows": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- parameters


def preset_names() -> list[str]:
    root = resources.files("zeno_discord") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> dict:
    path = resources.files("zeno_discord") / "presets" / f"{name}.json"
    if not path.is_file():
        raise UsageError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return json.loads(path.read_text())


def _read_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a flat JSON object")
    return data


def _coerce(opt: Option, value):
    try:
        if opt.kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return opt.kind(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--{opt.name}: invalid value {value!r}") from exc


def resolve(command: str, flags: dict, file_values: dict) -> dict:
    """Merge flags over file values over defaults; reject unknown keys."""
    file_values = dict(file_values)
    file_command = file_values.pop("command", command)
    if file_command != command:
        raise UsageError(f"config is for command {file_command!r}, not {command!r}")
    known = {o.name for o in OPTIONS[command]} | set(COMMON_KEYS)
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
    cfg = {}
    for opt in OPTIONS[command]:
        if flags.get(opt.name) is not None:
            cfg[opt.name] = _coerce(opt, flags[opt.name])
        elif opt.name in file_values:
            cfg[opt.name] = _coerce(opt, file_values[opt.name])
        else:
            cfg[opt.name] = opt.default
    for key in COMMON_KEYS:
        cfg[key] = flags.get(key) if flags.get(key) is not None else file_values.get(key)
    cfg["format"] = cfg["format"] or "csv"
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {cfg['format']!r}")
    return cfg


def grid(cfg: dict, axis: str) -> np.ndarray:
    lo, hi, steps = cfg[f"{axis}-min"], cfg[f"{axis}-max"], cfg[f"{axis}-steps"]
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"{axis} range must be finite")
    if steps < 2:
        raise UsageError(f"--{axis}-steps must be >= 2, got {steps}")
    if not lo < hi:
        raise UsageError(f"--{axis}-min must be below --{axis}-max")
    return np.linspace(lo, hi, steps)


def _choice(cfg, key, enum_cls):
    try:
        return enum_cls(cfg[key])
    except ValueError as exc:
        raise UsageError(f"--{key}: invalid value {cfg[key]!r}") from exc


def _spin_boson(cfg: dict, bias: float) -> SpinBosonParams:
    for key in ("delta", "eta", "omega-c", "bias", "bias1", "bias2"):
        if key in cfg and not math.isfinite(cfg[key]):
            raise UsageError(f"--{key} must be finite")
    try:
        return SpinBosonParams(cfg["delta"], cfg["eta"], bias, cfg["omega-c"], cfg["beta"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def thread_count(requested) -> int:
    if requested is None:
        requested = os.environ.get(THREADS_ENV, 1)
    try:
        n = int(requested)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid thread count {requested!r}") from exc
    if n < 0:
        raise UsageError("thread count must be >= 0")
    return n or (os.cpu_count() or 1)


def _map(fn, items: list, threads: int) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


# ---------------------------------------------------------------- row workers


def _gamma_row(job):
    tau, p = job
    g = gamma_rate(tau, p)
    # d gamma / d tau is the integrand at the upper limit
    dg = 0.5 * p.delta**2 * kernel_time(tau, p)
    return [tau, g, dg, math.exp(-g * tau)]


def _sweep_row(job):
    amp, tau, family, p1, p2, side = job
    g1, g2 = gamma_rate(tau, p1), gamma_rate(tau, p2)
    u1sq, u2sq = math.exp(-g1 * tau), math.exp(-g2 * tau)
    try:
        s1, s2 = survival_from_rate(g1, tau), survival_from_rate(g2, tau)
    except NegativeRate:
        return [u1sq, u2sq] + [None] * 8 + ["indeterminate"]
    init = InitialState(family, amp)
    qq = discord(partition_state(init, s1, s2, Partition.QUBIT_QUBIT), side)
    rr = discord(partition_state(init, s1, s2, Partition.RESERVOIR_RESERVOIR), side)
    status = "determinate" if qq.determinate and rr.determinate else "indeterminate"
    return [
        u1sq, u2sq,
        qq.concurrence, rr.concurrence,
        qq.discord, rr.discord,
        qq.mutual_info, rr.mutual_info,
        qq.classical_corr, rr.classical_corr,
        status,
    ]


def _nh_row(job):
    r, t, init, v0, delta_e, tau, mode, side = job
    m = PrecisionModel.unit_system(r, v0=v0, delta_e=delta_e, tau=tau)
    t_phys = t * tau
    occ = occupation_probs(m, t_phys, mode)
    qq = discord_under_measurement(m, t_phys, init, Partition.QUBIT_QUBIT, mode=mode, side=side)
    rr = discord_under_measurement(m, t_phys, init, Partition.RESERVOIR_RESERVOIR, mode=mode, side=side)
    status = "determinate" if qq.determinate and rr.determinate else "indeterminate"
    return [r, t, occ.p11, occ.p10, qq.discord, rr.discord, status]


# ---------------------------------------------------------------- commands


def cmd_gamma(cfg: dict, threads: int):
    taus = grid(cfg, "tau")
    if taus[0] < 0:
        raise UsageError("--tau-min must be >= 0")
    p = _spin_boson(cfg, cfg["bias"])
    rows = _map(_gamma_row, [(float(t), p) for t in taus], threads)
    return ["tau", "gamma", "dgamma", "survival_u2"], rows


def cmd_crossover(cfg: dict, threads: int):
    res = crossover_time(_spin_boson(cfg, cfg["bias"]))
    return ["tau_analytic", "tau_numeric", "mu", "kind"], [[res.tau_analytic, res.tau_numeric, res.mu, res.kind.value]]


def cmd_sweep(cfg: dict, threads: int):
    family = _choice(cfg, "family", Family)
    side = _choice(cfg, "side", Side)
    taus = grid(cfg, "tau")
    if taus[0] < 0:
        raise UsageError("--tau-min must be >= 0")
    amp_axis = cfg["amp-steps"] >= 2
    amps = grid(cfg, "amp") if amp_axis else np.array([cfg["amp"]])
    if amps.min() < 0 or amps.max() > 1:
        raise UsageError("amplitudes must lie in [0, 1]")
    p1 = _spin_boson(cfg, cfg["bias1"])
    p2 = _spin_boson(cfg, cfg["bias2"])
    jobs = [(float(a), float(t), family, p1, p2, side) for a in amps for t in taus]
    results = _map(_sweep_row, jobs, threads)
    columns = ["tau", "u1sq", "u2sq", "C_qq", "C_rr", "D_qq", "D_rr", "I_qq", "I_rr", "CC_qq", "CC_rr"]
    rows = [[t, *res[:-1]] for (a, t, *_), res in zip(jobs, results)]
    if amp_axis:
        columns.insert(0, "amp")
        rows = [[job[0], *row] for job, row in zip(jobs, rows)]
    if any(res[-1] == "indeterminate" for res in results):
        columns.append("status")
        rows = [[*row, res[-1]] for row, res in zip(rows, results)]
    return columns, rows


def cmd_nh_sweep(cfg: dict, threads: int):
    family = _choice(cfg, "family", Family)
    side = _choice(cfg, "side", Side)
    if cfg["mode"] not in ("propagator", "printed"):
        raise UsageError(f"--mode must be propagator or printed, got {cfg['mode']!r}")
    rs, ts = grid(cfg, "r"), grid(cfg, "t")
    if rs[0] <= 0 or ts[0] < 0:
        raise UsageError("need r > 0 and t >= 0")
    try:
        init = InitialState(family, cfg["amp"])
        PrecisionModel.unit_system(rs[0], v0=cfg["v0"], delta_e=cfg["delta-e"], tau=cfg["tau"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    jobs = [
        (float(r), float(t), init, cfg["v0"], cfg["delta-e"], cfg["tau"], cfg["mode"], side)
        for r in rs
        for t in ts
    ]
    return ["r", "t", "P11", "P10", "D_qq", "D_rr", "status"], _map(_nh_row, jobs, threads)


COMMANDS = {"gamma": cmd_gamma, "crossover": cmd_crossover, "sweep": cmd_sweep, "nh-sweep": cmd_nh_sweep}


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zeno-discord", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--config", help="flat JSON object keyed by long flag names")
        p.add_argument("--preset", help=f"built-in recipe ({', '.join(preset_names())})")
        p.add_argument("--threads", help=f"worker processes, 0 = all cores (env {THREADS_ENV})")
        for opt in options:
            p.add_argument(f"--{opt.name}", dest=opt.name, help=f"{opt.help} (default {opt.default})".strip())
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_validate(out: str | None) -> int:
    results = selfcheck.run_checks()
    _emit("".join(r.line() + "\n" for r in results), out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATE


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMS if exc.code else EXIT_OK
    flags = vars(args)
    command = flags.pop("command")
    try:
        file_values = {}
        if flags.get("preset"):
            file_values.update(load_preset(flags["preset"]))
        if flags.get("config"):
            file_values.update(_read_config(flags["config"]))
        cfg = resolve(command, flags, file_values)
        if command == "validate":
            return _run_validate(cfg["out"])
        threads = thread_count(cfg["threads"])
        columns, rows = COMMANDS[command](cfg, threads)
        params = {"command": command, **{k: v for k, v in cfg.items() if k not in COMMON_KEYS}}
        _emit(render(columns, rows, cfg["format"], params), cfg["out"])
    except UsageError as exc:
        print(f"zeno-discord: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (QuadratureFailure, ArithmeticError) as exc:
        print(f"zeno-discord: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ZenoDiscordError, ValueError) as exc:
        print(f"zeno-discord: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    return EXIT_OK


def main() -> None:
    sys.exit(run())
