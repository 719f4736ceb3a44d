"""Command-line front end.

Frequencies are given in units of omega1 (omega1 = 1 internally). Settings
may come from a ``key = value`` config file (``--config``); flags override it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics, normal_modes, observables, oracle
from .model import ModelParams, ParameterError, Regime, spectrum
from .propagator import Propagator, propagator, propagator_blocks, symplectic_defect

SWEEP_QUANTITIES = ("regime", "omega_minus_sq", "max_f", "max_squeeze")
APPROX_CHOICES = {
    "near-instability": asymptotics.ApproxRegime.NEAR_INSTABILITY,
    "weak-coupling": asymptotics.ApproxRegime.WEAK_COUPLING,
    "short-time": asymptotics.ApproxRegime.SHORT_TIME,
}


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


# ---------------------------------------------------------------- config


@dataclass
class ConfigFile:
    path: str
    values: dict[str, str] = field(default_factory=dict)
    lines: dict[str, int] = field(default_factory=dict)

    def where(self, key: str) -> str:
        return f"{self.path}:{self.lines[key]}"


def read_config(path: str) -> ConfigFile:
    cfg = ConfigFile(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if not key:
            raise ConfigError(f"{path}:{lineno}: missing key")
        if key in cfg.values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r} (first set on line {cfg.lines[key]})")
        cfg.values[key] = value
        cfg.lines[key] = lineno
    return cfg


class Settings:
    """Flag values layered over config values over built-in defaults."""

    def __init__(self, args: argparse.Namespace, config: ConfigFile | None, known: set[str]):
        self.args = args
        self.config = config
        if config is not None:
            for key in config.values:
                if key not in known:
                    raise ConfigError(f"{config.where(key)}: unknown field {key!r}")

    def get(self, key: str, convert, default=None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if self.config is not None and key in self.config.values:
            try:
                return convert(self.config.values[key])
            except ValueError as exc:
                raise ConfigError(f"{self.config.where(key)}: bad value for {key!r}: {exc}") from exc
        return default

    def source(self, key: str) -> str:
        if getattr(self.args, key, None) is None and self.config is not None and key in self.config.values:
            return self.config.where(key)
        return f"--{key.replace('_', '-')}"


def parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be START:STOP:STEP, got {text!r}")
    start, stop, step = (float(x) for x in parts)
    if not step > 0.0:
        raise ValueError("range step must be positive")
    if stop < start:
        raise ValueError("range is empty (STOP < START)")
    return start, stop, step


def range_values(start: float, stop: float, step: float) -> np.ndarray:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding keeps grid points such as 0.1 + 4*0.1 exactly on the critical lines
    return np.round(start + step * np.arange(count), 12)


def parse_complex_parts(settings: Settings, name: str) -> complex:
    return complex(settings.get(f"{name}_re", float, 0.0), settings.get(f"{name}_im", float, 0.0))


def model_params(settings: Settings) -> ModelParams:
    omega2 = settings.get("omega2", float, 0.5)
    omega = settings.get("omega", float, 0.0)
    try:
        return ModelParams(1.0, omega2, omega)
    except ParameterError as exc:
        raise ConfigError(f"{settings.source('omega2')}/{settings.source('omega')}: {exc}") from exc


# ---------------------------------------------------------------- output


def open_output(path: str | None):
    if path in (None, "-"):
        return _Stdout()
    return open(path, "w", encoding="utf-8", newline="")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def write_csv(path: str | None, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    with open_output(path) as fh:
        fh.write(buf.getvalue())


def write_json(path: str | None, payload) -> None:
    with open_output(path) as fh:
        fh.write(json.dumps(payload, indent=2, allow_nan=True))
        fh.write("\n")


def params_dict(p: ModelParams) -> dict:
    return {"omega1": p.omega1, "omega2": p.omega2, "omega": p.omega}


# ---------------------------------------------------------------- commands


def _threads() -> int:
    raw = os.environ.get("ROTMODE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"ROTMODE_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def _sweep_point(omega2: float, omega: float, quantity: str, t_grid: np.ndarray) -> list:
    p = ModelParams(1.0, omega2, omega)
    spec = spectrum(p)
    row = [omega2, omega, str(spec.regime), spec.omega_plus_sq, spec.omega_minus_sq]
    if quantity in ("max_f", "max_squeeze"):
        try:
            cols = observables.series_arrays(p, t_grid)
        except (observables.InternalConsistencyError, FloatingPointError):
            row.append(math.nan)
        else:
            if quantity == "max_f":
                row.append(float(np.max(cols["f"])))
            else:
                shifted = np.stack([cols[k] for k in ("dq1", "dp1", "dq2", "dp2")])
                row.append(float(np.min(shifted)))
    return row


def cmd_stability(settings: Settings) -> int:
    fmt_name = settings.get("format", _output_format, "csv")
    out = settings.get("out", str, "-")
    if not settings.get("sweep", _boolean, False):
        p = model_params(settings)
        spec = spectrum(p)
        record = {
            **params_dict(p),
            "regime": str(spec.regime),
            "isotropic": spec.isotropic,
            "delta": spec.delta,
            "omega_plus_sq": spec.omega_plus_sq,
            "omega_minus_sq": spec.omega_minus_sq,
        }
        if fmt_name == "json":
            write_json(out, record)
        else:
            header = list(record)
            write_csv(out, header, [[str(v) if isinstance(v, (str, bool)) else v for v in record.values()]])
        return 0

    w2_range = settings.get("omega2_range", parse_range, (0.1, 1.0, 0.1))
    w_range = settings.get("omega_range", parse_range, (0.0, 2.0, 0.1))
    quantity = settings.get("quantity", str, "regime")
    if quantity not in SWEEP_QUANTITIES:
        raise ConfigError(f"{settings.source('quantity')}: quantity must be one of {SWEEP_QUANTITIES}")
    w2_values = range_values(*w2_range)
    if w2_values[0] <= 0.0 or w2_values[-1] > 1.0 + 1e-12:
        raise ConfigError(f"{settings.source('omega2_range')}: omega2/omega1 must lie in (0, 1]")
    w2_values = np.minimum(w2_values, 1.0)
    w_values = range_values(*w_range)
    if w_values[0] < 0.0:
        raise ConfigError(f"{settings.source('omega_range')}: omega/omega1 must be nonnegative")
    tmax = settings.get("tmax", float, 50.0)
    points = settings.get("points", int, 501)
    t_grid = np.linspace(0.0, tmax, points)

    grid = [(float(a), float(b)) for a in w2_values for b in w_values]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda ab: _sweep_point(ab[0], ab[1], quantity, t_grid), grid))
    header = ["omega2_over_omega1", "omega_over_omega1", "regime", "omega_plus_sq", "omega_minus_sq"]
    if quantity in ("max_f", "max_squeeze"):
        header.append(quantity)
    if fmt_name == "json":
        write_json(out, {"quantity": quantity, "columns": header, "rows": rows})
    else:
        write_csv(out, header, rows)
    return 0


def cmd_evolve(settings: Settings) -> int:
    p = model_params(settings)
    tmax = settings.get("tmax", float, None)
    points = settings.get("points", int, 2048)
    if points < 1:
        raise ConfigError(f"{settings.source('points')}: points must be >= 1")
    if tmax is None:
        tmax = observables.slow_period(p)
    if tmax < 0.0:
        raise ConfigError(f"{settings.source('tmax')}: tmax must be >= 0")
    t_grid = np.linspace(0.0, tmax, points)
    cols = observables.series_arrays(p, t_grid)
    rows = np.column_stack([cols[name] for name in observables.CSV_COLUMNS])
    out = settings.get("out", str, "-")
    if settings.get("format", _output_format, "csv") == "json":
        state = observables.CoherentInput(parse_complex_parts(settings, "alpha1"), parse_complex_parts(settings, "alpha2"))
        energy = observables.mean_energy(p, propagator(p, 0.0), state)
        write_json(out, {
            "params": params_dict(p),
            "alpha1": [state.alpha1.real, state.alpha1.imag],
            "alpha2": [state.alpha2.real, state.alpha2.imag],
            "mean_energy": energy,
            "columns": list(observables.CSV_COLUMNS),
            "rows": rows.tolist(),
        })
    else:
        write_csv(out, observables.CSV_COLUMNS, rows.tolist())
    return 0


def validation_table(p: ModelParams, t_grid, dt: float | None = None):
    """Rows ``(t, max_abs_diff, defect_analytic, defect_oracle)`` and the scaled deviations."""
    t = np.asarray(t_grid, dtype=float)
    u, v = propagator_blocks(p, t)
    full = oracle.integrate_series(p, t, dt)
    rows, scaled = [], []
    unstable = spectrum(p).regime is Regime.UNSTABLE
    for i, ti in enumerate(t):
        exact = Propagator(float(ti), u[i], v[i])
        numeric = Propagator(float(ti), full[i, :2, :2], full[i, :2, 2:])
        ref = exact.full()
        diff = float(np.max(np.abs(ref - full[i])))
        rows.append([ti, diff, symplectic_defect(exact), symplectic_defect(numeric)])
        scaled.append(diff / max(1.0, float(np.max(np.abs(ref)))) if unstable else diff)
    return rows, np.array(scaled)


def cmd_validate(settings: Settings) -> int:
    p = model_params(settings)
    tmax = settings.get("tmax", float, 50.0)
    points = settings.get("points", int, 501)
    dt = settings.get("dt", float, None)
    threshold = settings.get("threshold", float, 1e-6)
    t_grid = np.linspace(0.0, tmax, points)
    try:
        rows, scaled = validation_table(p, t_grid, dt)
    except oracle.StepSizeError as exc:
        raise ConfigError(f"{settings.source('dt')}: {exc}") from exc
    header = ["t", "max_abs_diff", "symplectic_defect_analytic", "symplectic_defect_oracle"]
    out = settings.get("out", str, "-")
    if settings.get("format", _output_format, "csv") == "json":
        write_json(out, {"params": params_dict(p), "columns": header, "rows": rows})
    else:
        write_csv(out, header, rows)

    spec = spectrum(p)
    growth = math.sqrt(max(-spec.omega_minus_sq, 0.0))
    for ti, _, defect, _ in rows:
        limit = 1e-9 * math.exp(growth * ti) if spec.regime is Regime.UNSTABLE else 1e-9
        if defect > limit:
            print(f"warning: analytic symplectic defect {defect:.3g} at t={ti:.6g} exceeds {limit:.3g}", file=sys.stderr)
            break
    worst = float(np.max(scaled, initial=0.0))
    kind = "relative" if spec.regime is Regime.UNSTABLE else "absolute"
    status = "PASS" if worst <= threshold else "FAIL"
    print(f"{status}: max {kind} deviation {worst:.3e} (threshold {threshold:.1e})", file=sys.stderr)
    return 0 if worst <= threshold else 1


def cmd_approx(settings: Settings) -> int:
    p = model_params(settings)
    name = settings.get("regime", str, "weak-coupling")
    if name not in APPROX_CHOICES:
        raise ConfigError(f"{settings.source('regime')}: regime must be one of {sorted(APPROX_CHOICES)}")
    tag = APPROX_CHOICES[name]
    tmax = settings.get("tmax", float, None)
    if tmax is None:
        tmax = observables.slow_period(p) if tag is asymptotics.ApproxRegime.NEAR_INSTABILITY else 20.0
    points = settings.get("points", int, 2001)
    t_grid = np.linspace(0.0, tmax, points)
    table = asymptotics.comparison_table(p, t_grid, tag)

    header = ["t"]
    columns = [t_grid]
    scaled = []
    for qname, cols in table.items():
        parts = [("", lambda x: x.real)] if qname.startswith("n") else [("re_", np.real), ("im_", np.imag)]
        for prefix, part in parts:
            header += [f"{prefix}{qname}_exact", f"{prefix}{qname}_approx"]
            columns += [part(cols[:, 0]), part(cols[:, 1])]
        scale = max(float(np.max(np.abs(cols[:, 0]))), asymptotics.ERROR_FLOOR)
        scaled.append(np.abs(cols[:, 1] - cols[:, 0]) / scale)
    row_dev = np.max(np.stack(scaled), axis=0)
    header.append("max_rel_dev")
    columns.append(row_dev)
    rows = np.column_stack(columns).tolist()
    out = settings.get("out", str, "-")
    if settings.get("format", _output_format, "csv") == "json":
        write_json(out, {"params": params_dict(p), "regime": str(tag), "columns": header, "rows": rows})
    else:
        write_csv(out, header, rows)
    print(f"max_rel_dev = {float(np.max(row_dev)):.6e}", file=sys.stderr)
    return 0


def cmd_normalmodes(settings: Settings) -> int:
    p = model_params(settings)
    nm = normal_modes.decompose(p)
    record = {"params": params_dict(p), "regime": str(spectrum(p).regime), **nm.to_dict()}
    try:
        record["signature"] = str(normal_modes.hamiltonian_signature(p))
    except normal_modes.NotApplicableError:
        record["signature"] = None
    write_json(settings.get("out", str, "-"), record)
    return 0


def cmd_propagator(settings: Settings) -> int:
    p = model_params(settings)
    t = settings.get("t", float, 0.0)
    prop = propagator(p, t)
    out = settings.get("out", str, "-")
    if settings.get("format", _output_format, "json") == "csv":
        header = ["t"] + [f"{blk}{r}{c}_{part}" for blk in "uv" for r in (1, 2) for c in (1, 2) for part in ("re", "im")]
        row = [t]
        for m in (prop.u, prop.v):
            for r in range(2):
                for c in range(2):
                    row += [m[r, c].real, m[r, c].imag]
        write_csv(out, header, [row])
    else:
        with open_output(out) as fh:
            fh.write(prop.to_json())
            fh.write("\n")
    return 0


# ---------------------------------------------------------------- parser


def _output_format(text: str) -> str:
    if text not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {text!r}")
    return text


def _boolean(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file; flags override it")
    common.add_argument("--omega2", type=float, help="omega2 / omega1 (default 0.5)")
    common.add_argument("--omega", type=float, help="rotation frequency / omega1 (default 0)")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json"))

    timed = argparse.ArgumentParser(add_help=False)
    timed.add_argument("--tmax", type=float, help="final time, in units of 1/omega1")
    timed.add_argument("--points", type=int, help="number of grid points")

    parser = argparse.ArgumentParser(prog="rotmode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stability", parents=[common, timed], help="regime classification or phase-diagram sweep")
    s.add_argument("--sweep", action="store_const", const=True, help="sweep a 2-D parameter grid")
    s.add_argument("--omega2-range", dest="omega2_range", type=parse_range, help="START:STOP:STEP")
    s.add_argument("--omega-range", dest="omega_range", type=parse_range, help="START:STOP:STEP")
    s.add_argument("--quantity", choices=SWEEP_QUANTITIES)
    s.set_defaults(handler=cmd_stability)

    e = sub.add_parser("evolve", parents=[common, timed], help="observable time series")
    for name in ("alpha1", "alpha2"):
        for part in ("re", "im"):
            e.add_argument(f"--{name}-{part}", dest=f"{name}_{part}", type=float)
    e.set_defaults(handler=cmd_evolve)

    v = sub.add_parser("validate", parents=[common, timed], help="closed form vs RK4 oracle")
    v.add_argument("--dt", type=float, help="oracle step (default min(1e-3, 0.01/omega_+))")
    v.add_argument("--threshold", type=float, help="maximum allowed deviation (default 1e-6)")
    v.set_defaults(handler=cmd_validate)

    a = sub.add_parser("approx", parents=[common, timed], help="approximations vs exact observables")
    a.add_argument("--regime", choices=sorted(APPROX_CHOICES))
    a.set_defaults(handler=cmd_approx)

    n = sub.add_parser("normalmodes", parents=[common], help="normal-mode decomposition as JSON")
    n.set_defaults(handler=cmd_normalmodes)

    pr = sub.add_parser("propagator", parents=[common], help="U(t), V(t) at one time")
    pr.add_argument("--t", type=float, help="time (default 0)")
    pr.set_defaults(handler=cmd_propagator)
    return parser


_CONFIG_KEYS = {
    "omega2", "omega", "out", "format", "tmax", "points", "sweep", "omega2_range", "omega_range",
    "quantity", "alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im", "dt", "threshold", "regime", "t",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = read_config(args.config) if args.config else None
        settings = Settings(args, config, _CONFIG_KEYS)
        return args.handler(settings)
    except (ConfigError, ParameterError, normal_modes.DegenerateTransformationError) as exc:
        print(f"rotmode {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"rotmode {args.command}: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
