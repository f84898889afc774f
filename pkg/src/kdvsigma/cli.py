"""Command-line interface.

Subcommands: info | periods | tau | field | verify.  A run is described
by a flat key = value config file; any flag overrides the file.  Exit
statuses: 0 success / all checks pass, 1 verification failure, 2 bad
config or input, 3 numerical failure (singular matrix, theta divisor).

Complex numbers serialize as [re, im] pairs in JSON and as "re+imi"
strings in CSV; divergent diagonal entries are written as "divergent".
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kdvcheck, periods, structmat, theta
from .curve import SolitonCurve, new_curve
from .errors import NumericalError, ThetaZero, ValidationError

DEFAULT_GRID = (-10.0, 10.0, 201, -1.0, 1.0, 5)


@dataclass
class RunConfig:
    wavenumbers: list
    grid: tuple = DEFAULT_GRID  # (t1min, t1max, t1count, t2min, t2max, t2count)
    higher_times: dict = dc_field(default_factory=dict)  # {3: value, 4: value, ...}
    tolerances: dict = dc_field(default_factory=dict)
    fmt: str = "csv"
    out: str = ""
    seed: int = kdvcheck.DEFAULT_SEED


@dataclass(frozen=True)
class FieldSample:
    t1: float
    t2: float
    value: float | None  # None marks a theta-divisor point


class ConfigError(ValidationError):
    pass


def _parse_floats(text):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list: {text!r}") from exc


def _parse_axis(text, axis):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{axis} must be min:max:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad {axis} axis {text!r}") from exc
    return lo, hi, n


def parse_config_file(path) -> dict:
    """Flat key = value file; '#' starts a comment; keys are lowercased."""
    data = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.rstrip()!r}")
                key, value = line.split("=", 1)
                data[key.strip().lower()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return data


def build_config(args) -> RunConfig:
    raw = parse_config_file(args.config) if args.config else {}
    if args.k is not None:
        raw["k"] = args.k
    if args.grid is not None:
        for piece in args.grid.split(","):
            axis, _, spec = piece.partition(":")
            axis = axis.strip().lower()
            if axis not in ("t1", "t2"):
                raise ConfigError(f"grid axis must be t1 or t2, got {axis!r}")
            raw[axis] = spec
    if args.format is not None:
        raw["format"] = args.format
    if args.out is not None:
        raw["out"] = args.out
    if args.seed is not None:
        raw["seed"] = str(args.seed)

    if "k" not in raw:
        raise ConfigError("no wavenumbers given (config key 'k' or flag --k)")
    wavenumbers = _parse_floats(raw.pop("k"))

    grid = list(DEFAULT_GRID)
    for idx, axis in ((0, "t1"), (3, "t2")):
        if axis in raw:
            grid[idx], grid[idx + 1], grid[idx + 2] = _parse_axis(raw.pop(axis), axis)
    grid = tuple(grid)
    for off, axis in ((0, "t1"), (3, "t2")):
        lo, hi, n = grid[off], grid[off + 1], grid[off + 2]
        if n < 2:
            raise ConfigError(f"{axis} count must be >= 2, got {n}")
        if not lo < hi:
            raise ConfigError(f"{axis} needs min < max, got {lo}..{hi}")

    higher = {}
    for key in list(raw):
        if key.startswith("t") and key[1:].isdigit():
            idx = int(key[1:])
            if idx < 3:
                raise ConfigError(f"axes t1/t2 take min:max:count, not {key} = value")
            try:
                higher[idx] = float(raw.pop(key))
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}") from exc

    tolerances = {}
    for key in list(raw):
        if key.startswith("tol."):
            check_id = key[4:]
            if check_id not in kdvcheck.DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown check id in {key!r}")
            try:
                val = float(raw.pop(key))
            except ValueError as exc:
                raise ConfigError(f"bad tolerance for {key}") from exc
            if not val > 0:
                raise ConfigError(f"tolerance {key} must be positive")
            tolerances[check_id] = val

    fmt = raw.pop("format", "csv").lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    out = raw.pop("out", "")
    try:
        seed = int(raw.pop("seed", str(kdvcheck.DEFAULT_SEED)))
    except ValueError as exc:
        raise ConfigError("seed must be an integer") from exc
    if raw:
        raise ConfigError(f"unknown config keys: {sorted(raw)}")
    return RunConfig(wavenumbers, grid, higher, tolerances, fmt, out, seed)


# --- serialization helpers -------------------------------------------------


def _c_json(z) -> list:
    return [float(z.real), float(z.imag)]


def _c_csv(z) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _matrix_json(mat, divergent_diag=False):
    arr = mat.to_array()
    body = [[_c_json(v) for v in row] for row in arr]
    if divergent_diag:
        return {"entries": body, "diag_divergent": True}
    return {"entries": body}


def _matrix_csv_lines(name, mat, divergent_diag=False):
    arr = mat.to_array()
    lines = [f"# {name} ({arr.shape[0]}x{arr.shape[1]})"]
    for i, row in enumerate(arr):
        cells = []
        for j, v in enumerate(row):
            if divergent_diag and i == j:
                cells.append("divergent")
            else:
                cells.append(_c_csv(v))
        lines.append(",".join(cells))
    return lines


def _write_output(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands --------------------------------------------------------------


def _curve_from(cfg: RunConfig) -> SolitonCurve:
    return new_curve(cfg.wavenumbers)


def cmd_info(cfg: RunConfig) -> int:
    c = _curve_from(cfg)
    lines = [
        f"genus            {c.genus}",
        f"wavenumbers k    {', '.join(f'{v:.12g}' for v in c.k)}",
        f"branch points a  {', '.join(f'{v:.12g}' for v in c.a)}",
        f"mu               {', '.join(f'{v.real:.12g}' for v in c.mu)}",
        f"lambda           {', '.join(f'{v.real:.12g}' for v in c.lam)}",
    ]
    for name, mat in (
        ("W (quotient coefficients)", structmat.build_W(c)),
        ("M (mu band matrix)", structmat.build_M(c)),
        ("K(0) (even wavenumber powers)", structmat.build_K(c, 0)),
        ("K(1) (odd wavenumber powers)", structmat.build_K(c, 1)),
        ("P' diagonal", structmat.build_Pdiag(c)),
        ("V (Vandermonde in a)", structmat.build_V(c)),
    ):
        lines.append(name)
        for row in mat.to_array():
            lines.append("  " + "  ".join(f"{v.real:.12g}{v.imag:+.12g}i" for v in row))
    _write_output("\n".join(lines) + "\n", cfg.out)
    return 0


def cmd_periods(cfg: RunConfig) -> int:
    c = _curve_from(cfg)
    data = periods.period_data(c)
    if cfg.fmt == "json":
        doc = {
            "wavenumbers": list(c.k),
            "genus": c.genus,
            "omega1": _matrix_json(data.omega1),
            "omega2_off": _matrix_json(data.omega2_off, divergent_diag=True),
            "tau_off": _matrix_json(data.tau_off, divergent_diag=True),
            "eta1": _matrix_json(data.eta1),
            "C": _matrix_json(data.C),
        }
        _write_output(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg.out)
    else:
        lines = []
        lines += _matrix_csv_lines("omega1", data.omega1)
        lines += _matrix_csv_lines("omega2_off", data.omega2_off, divergent_diag=True)
        lines += _matrix_csv_lines("tau_off", data.tau_off, divergent_diag=True)
        lines += _matrix_csv_lines("eta1", data.eta1)
        lines += _matrix_csv_lines("C", data.C)
        _write_output("\n".join(lines) + "\n", cfg.out)
    return 0


def cmd_tau(cfg: RunConfig) -> int:
    c = _curve_from(cfg)
    tau = theta.canonical_tau(c)
    if cfg.fmt == "json":
        doc = {
            "wavenumbers": list(c.k),
            "terms": [
                {"amplitude": _c_json(a), "wavevector": [float(w) for w in wav]}
                for a, wav in zip(tau.amplitudes, tau.wavevectors)
            ],
        }
        _write_output(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg.out)
    else:
        lines = ["amplitude," + ",".join(f"kappa{m}" for m in range(1, c.genus + 1))]
        for a, wav in zip(tau.amplitudes, tau.wavevectors):
            lines.append(_c_csv(a) + "," + ",".join(f"{w:.17g}" for w in wav))
        _write_output("\n".join(lines) + "\n", cfg.out)
    return 0


def field_samples(cfg: RunConfig, c: SolitonCurve):
    """Row-major field samples over the configured grid.

    Higher hierarchy times are held at their configured values
    (default 0); for genus 1 the t2 column is carried through but has
    no effect on the field.
    """
    t1lo, t1hi, n1, t2lo, t2hi, n2 = cfg.grid
    t1s = np.linspace(t1lo, t1hi, n1)
    t2s = np.linspace(t2lo, t2hi, n2)
    point = np.zeros(c.genus)
    for idx, val in cfg.higher_times.items():
        if idx <= c.genus:
            point[idx - 1] = val
    samples = []
    failures = 0
    for t1 in t1s:
        for t2 in t2s:
            p = point.copy()
            p[0] = t1
            if c.genus >= 2:
                p[1] = t2
            try:
                val = theta.u_field(c, p)
            except NumericalError:
                failures += 1
                samples.append(FieldSample(float(t1), float(t2), None))
                continue
            samples.append(FieldSample(float(t1), float(t2), val))
    return samples, failures


def cmd_field(cfg: RunConfig) -> int:
    c = _curve_from(cfg)
    samples, failures = field_samples(cfg, c)
    if cfg.fmt == "json":
        doc = {
            "columns": ["t1", "t2", "u"],
            "rows": [[s.t1, s.t2, s.value] for s in samples],
        }
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        lines = ["t1,t2,u"]
        for s in samples:
            cell = "nan" if s.value is None else f"{s.value:.17g}"
            lines.append(f"{s.t1:.17g},{s.t2:.17g},{cell}")
        text = "\n".join(lines) + "\n"
    _write_output(text, cfg.out)
    if failures:
        print(f"warning: {failures} grid points on the theta divisor "
              f"written as missing values", file=sys.stderr)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    c = _curve_from(cfg)
    report = kdvcheck.run_suite(c, seed=cfg.seed, tolerances=cfg.tolerances)
    doc = {
        "wavenumbers": list(c.k),
        "seed": cfg.seed,
        "all_passed": report.all_passed,
        "checks": [
            {
                "id": ch.check_id,
                "max_error": ch.max_error,
                "tolerance": ch.tolerance,
                "passed": ch.passed,
                "points": ch.points,
                "note": ch.note,
            }
            for ch in report.checks
        ],
    }
    if cfg.fmt == "json":
        _write_output(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg.out)
    else:
        print(f"verification for k = {', '.join(f'{v:g}' for v in c.k)} (seed {cfg.seed})")
        for line in report.lines():
            print(line)
        print("result:", "all checks passed" if report.all_passed else "FAILURES present")
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, sort_keys=True, indent=2)
                fh.write("\n")
    return 0 if report.all_passed else 1


COMMANDS = {
    "info": cmd_info,
    "periods": cmd_periods,
    "tau": cmd_tau,
    "field": cmd_field,
    "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdvsigma",
        description="Multi-soliton KdV fields from degenerate hyperelliptic curve data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("info", "print curve data and structural matrices"),
        ("periods", "emit period matrices"),
        ("tau", "emit the canonical tau terms"),
        ("field", "sample the soliton field over a grid"),
        ("verify", "run the verification suite"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--k", help="wavenumbers, e.g. \"2,1\"")
        p.add_argument("--grid", help="grid spec, e.g. \"t1:-3:3:121,t2:-3:3:121\"")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int, help="seed for randomized checks")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
