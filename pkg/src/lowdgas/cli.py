"""Command-line front end.

Every quantity the library computes can be evaluated either at a single
point (``lowdgas ll shift --gamma 1 --tau 0.5``) or on a 1-2 axis grid
driven by a sweep specfile (``lowdgas sweep fig1.sweep``).  Results are
written as CSV or JSON tables built for reproducibility: fixed column
order, 17-significant-digit floats, LF line endings, metadata echoing
the effective configuration, and no wall-clock timestamps (set
``SOURCE_DATE_EPOCH`` to embed one).  Identical inputs and tool version
give byte-identical files; grid points are evaluated independently, so
``--jobs N`` changes wall time but never contents.

Exit codes: 0 success; 1 malformed spec, flags, or config; 2 the sweep
finished but some grid points failed (their rows carry the error in the
``status`` column); 3 output could not be written.
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
from datetime import datetime, timezone
from typing import Callable, Mapping, Sequence

import numpy as np

from . import __version__
from .anyon_abelian import SoftCoreBC, b2_softcore, e_rel_abelian, e_rel_semion
from .anyon_nacs import NACSSystem, b2_nacs_isotropic, channel_weights, e_rel_nacs
from .lieb_liniger import (
    LLParams,
    b2_ll,
    e_res_finite_T,
    e_res_zero_T,
    observables,
    solve_ground_state,
    solve_tba,
)
from .virial import (
    B2SmallBetaShape,
    VirialModel,
    check_scale_invariance,
    classify_shift,
    lieb_liniger_b2_model,
    power_law_model,
    thermo_from_virial,
)

__all__ = [
    "Axis",
    "SweepSpec",
    "ResultTable",
    "SpecError",
    "run_sweep",
    "emit",
    "render_csv",
    "render_json",
    "load_table",
    "parse_specfile",
    "main",
    "EXIT_OK",
    "EXIT_SPEC",
    "EXIT_SOLVER",
    "EXIT_IO",
]

EXIT_OK = 0
EXIT_SPEC = 1
EXIT_SOLVER = 2
EXIT_IO = 3

_FLOAT_FMT = "%.17g"


class SpecError(ValueError):
    """A sweep spec, command line, or config file could not be understood."""


# ---------------------------------------------------------------------------
# Sweep domain types


@dataclass(frozen=True)
class Axis:
    """One swept parameter: ``count`` points from ``start`` to ``stop``,
    spaced linearly or logarithmically.
    """

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if not self.name or not self.name.isidentifier():
            raise SpecError(f"axis name {self.name!r} is not a valid identifier")
        for v in (self.start, self.stop):
            if not math.isfinite(float(v)):
                raise SpecError(f"axis {self.name}: bounds must be finite")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        if self.count != int(self.count) or self.count < 1:
            raise SpecError(f"axis {self.name}: count must be a positive integer")
        object.__setattr__(self, "count", int(self.count))
        if self.spacing not in ("linear", "log"):
            raise SpecError(f"axis {self.name}: spacing must be linear or log")
        if self.spacing == "log" and (self.start <= 0.0 or self.stop <= 0.0):
            raise SpecError(f"axis {self.name}: log spacing needs positive bounds")

    def values(self) -> tuple[float, ...]:
        if self.spacing == "log":
            grid = np.geomspace(self.start, self.stop, self.count)
        else:
            grid = np.linspace(self.start, self.stop, self.count)
        return tuple(float(v) for v in grid)


@dataclass(frozen=True)
class SweepSpec:
    """What to evaluate, on which grid, with which fixed parameters, and
    where the table goes (``output=None`` means stdout).
    """

    quantity: str
    axes: tuple[Axis, ...]
    fixed: Mapping[str, object] = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.quantity not in SWEEPABLE:
            known = ", ".join(sorted(SWEEPABLE))
            raise SpecError(f"unknown quantity {self.quantity!r} (one of: {known})")
        axes = tuple(self.axes)
        object.__setattr__(self, "axes", axes)
        if not 1 <= len(axes) <= 2:
            raise SpecError("a sweep needs one or two axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise SpecError("axis names must be distinct")
        fixed = dict(self.fixed)
        object.__setattr__(self, "fixed", fixed)
        for name in names:
            if name in fixed:
                raise SpecError(f"{name} is both an axis and a fixed parameter")
        if self.format not in ("csv", "json"):
            raise SpecError(f"format must be csv or json, got {self.format!r}")


@dataclass(frozen=True)
class ResultTable:
    """Tabular result: ``columns`` are ``(name, unit)`` pairs, rows hold
    floats or strings (empty string = value not produced), and metadata
    echoes everything needed to reproduce the run.  A NaN may only
    appear in a row whose ``status`` cell says why.
    """

    columns: tuple[tuple[str, str], ...]
    rows: tuple[tuple, ...]
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        cols = tuple((str(n), str(u)) for n, u in self.columns)
        object.__setattr__(self, "columns", cols)
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "metadata", dict(self.metadata))
        names = [n for n, _ in cols]
        status_at = names.index("status") if "status" in names else None
        for i, row in enumerate(rows):
            if len(row) != len(cols):
                raise ValueError(
                    f"row {i} has {len(row)} cells, expected {len(cols)}"
                )
            has_nan = any(
                isinstance(c, float) and math.isnan(c) for c in row
            )
            if has_nan and (status_at is None or row[status_at] == "ok"):
                raise ValueError(f"row {i} holds NaN without a status flag")

    @property
    def failures(self) -> int:
        names = [n for n, _ in self.columns]
        if "status" not in names:
            return 0
        at = names.index("status")
        return sum(1 for row in self.rows if row[at] != "ok")


# ---------------------------------------------------------------------------
# Quantity registry


def _as_sigma(value) -> int:
    s = float(value)
    if s not in (1.0, -1.0):
        raise SpecError(f"sigma must be +1 or -1, got {value}")
    return int(s)


def _as_int(value, name: str) -> int:
    v = float(value)
    if v != int(v):
        raise SpecError(f"{name} must be an integer, got {value}")
    return int(v)


def _ll_solver_kw(opts: Mapping) -> dict:
    kw = {}
    if opts.get("tol") is not None:
        kw["tol"] = float(opts["tol"])
    if opts.get("nodes") is not None:
        kw["n0"] = int(opts["nodes"])
    return kw


def _eval_ll_ground(p, opts, ctx):
    gs = solve_ground_state(p["gamma"], **_ll_solver_kw(opts))
    return (gs.energy, gs.ell)


def _eval_ll_tba(p, opts, ctx):
    params = LLParams(gamma=p["gamma"], tau=p["tau"])
    sol = solve_tba(params, **_ll_solver_kw(opts))
    pressure, energy = observables(sol, params)
    return (sol.mu, pressure, energy)


def _eval_ll_shift(p, opts, ctx):
    if p["tau"] == 0.0:
        return (e_res_zero_T(p["gamma"]),)
    return (e_res_finite_T(LLParams(gamma=p["gamma"], tau=p["tau"]), **_ll_solver_kw(opts)),)


def _eval_ll_b2(p, opts, ctx):
    return (b2_ll(LLParams(gamma=p["gamma"], tau=p["tau"])),)


def _eval_anyon_b2(p, opts, ctx):
    out = b2_softcore(p["alpha"], SoftCoreBC(_as_sigma(p["sigma"]), p["eps"]))
    return (out.value,) + out.parts


def _eval_anyon_shift(p, opts, ctx):
    return (e_rel_abelian(p["alpha"], SoftCoreBC(_as_sigma(p["sigma"]), p["eps"]), p["x"]),)


def _eval_anyon_semion(p, opts, ctx):
    return (e_rel_semion(SoftCoreBC(_as_sigma(p["sigma"]), p["eps"]), p["x"]),)


def _nacs_system(p) -> NACSSystem:
    return NACSSystem.isotropic(
        _as_int(p["k"], "k"), p["l"], p["eps"], _as_sigma(p["sigma"])
    )


def _eval_nacs_b2(p, opts, ctx):
    return (b2_nacs_isotropic(_nacs_system(p)),)


def _eval_nacs_shift(p, opts, ctx):
    return (e_rel_nacs(_nacs_system(p), p["x"]),)


def _prepare_virial_model(fixed: Mapping) -> dict:
    kind = str(fixed.get("model", "power-law"))
    if kind == "power-law":
        for key in ("d", "alpha", "amps"):
            if key not in fixed:
                raise SpecError(f"power-law model needs {key}")
        amps = fixed["amps"]
        if isinstance(amps, str):
            try:
                amps = tuple(float(a) for a in amps.split(",") if a.strip())
            except ValueError as err:
                raise SpecError(f"bad amps list {fixed['amps']!r}") from err
        else:
            amps = (float(amps),)
        if not amps:
            raise SpecError("amps must list at least one coefficient")
        model = power_law_model(_as_int(fixed["d"], "d"), float(fixed["alpha"]), amps)
    elif kind == "delta-gas":
        if "c" not in fixed:
            raise SpecError("delta-gas model needs c")
        model = lieb_liniger_b2_model(float(fixed["c"]))
    else:
        raise SpecError(f"unknown model {kind!r} (power-law or delta-gas)")
    return {"model": model}


def _eval_virial_thermo(p, opts, ctx):
    out = thermo_from_virial(ctx["model"], p["rho"], p["T"])
    return (
        out.pressure,
        out.helmholtz,
        out.gibbs,
        out.entropy,
        out.energy,
        out.enthalpy,
    )


def _prepare_classify(fixed: Mapping) -> dict:
    extra = fixed.get("extra", ())
    if isinstance(extra, str):
        extra = _parse_extra_terms([t for t in extra.split(";") if t.strip()])
    return {"extra": tuple(extra)}


def _eval_classify(p, opts, ctx):
    shape = B2SmallBetaShape(
        sqrt_beta=p["sqrt_beta"],
        beta_log_beta=p["beta_log_beta"],
        beta=p["beta"],
        extra=ctx.get("extra", ()),
    )
    out = classify_shift(shape, _as_int(p["d"], "d"))
    limit = out.limit_value if out.limit_value is not None else ""
    return (out.verdict, limit)


@dataclass(frozen=True)
class _Quantity:
    axis_ok: tuple[str, ...]
    required: tuple[str, ...]
    defaults: Mapping[str, float]
    outputs: tuple[tuple[str, str], ...]
    evaluate: Callable[[Mapping, Mapping, Mapping], tuple]
    prepare: Callable[[Mapping], dict] | None = None
    model_keys: tuple[str, ...] = ()


_LL_AXES = ("gamma", "tau")
_ANYON_AXES = ("alpha", "sigma", "eps", "x")
_NACS_AXES = ("k", "l", "eps", "sigma", "x")

REGISTRY: dict[str, _Quantity] = {
    "ll-ground": _Quantity(
        axis_ok=("gamma",),
        required=("gamma",),
        defaults={},
        outputs=(("energy", "hbar^2 rho^2/2m"), ("ell", "")),
        evaluate=_eval_ll_ground,
    ),
    "ll-tba": _Quantity(
        axis_ok=_LL_AXES,
        required=("gamma", "tau"),
        defaults={},
        outputs=(("mu", "k_B T_D"), ("pressure", "rho k_B T_D"), ("energy", "k_B T_D")),
        evaluate=_eval_ll_tba,
    ),
    "ll-shift": _Quantity(
        axis_ok=_LL_AXES,
        required=("gamma", "tau"),
        defaults={},
        outputs=(("e_res", "k_B T_D"),),
        evaluate=_eval_ll_shift,
    ),
    "ll-b2": _Quantity(
        axis_ok=_LL_AXES,
        required=("gamma", "tau"),
        defaults={},
        outputs=(("b2", "lambda_T"),),
        evaluate=_eval_ll_b2,
    ),
    "anyon-b2": _Quantity(
        axis_ok=("alpha", "eps"),
        required=("alpha", "sigma", "eps"),
        defaults={},
        outputs=(
            ("b2", "lambda_T^2"),
            ("hard_core_part", "lambda_T^2"),
            ("bound_state_part", "lambda_T^2"),
            ("scattering_part", "lambda_T^2"),
        ),
        evaluate=_eval_anyon_b2,
    ),
    "anyon-shift": _Quantity(
        axis_ok=("alpha", "eps", "x"),
        required=("alpha", "sigma", "eps", "x"),
        defaults={},
        outputs=(("e_rel", ""),),
        evaluate=_eval_anyon_shift,
    ),
    "anyon-semion": _Quantity(
        axis_ok=("eps", "x"),
        required=("sigma", "eps", "x"),
        defaults={},
        outputs=(("e_rel", ""),),
        evaluate=_eval_anyon_semion,
    ),
    "nacs-b2": _Quantity(
        axis_ok=("eps",),
        required=("k", "l", "eps", "sigma"),
        defaults={},
        outputs=(("b2", "lambda_T^2"),),
        evaluate=_eval_nacs_b2,
    ),
    "nacs-shift": _Quantity(
        axis_ok=("eps", "x"),
        required=("k", "l", "eps", "sigma", "x"),
        defaults={},
        outputs=(("e_rel", ""),),
        evaluate=_eval_nacs_shift,
    ),
    "virial-thermo": _Quantity(
        axis_ok=("rho", "T"),
        required=("rho", "T"),
        defaults={},
        outputs=(
            ("pressure", "k_B T"),
            ("helmholtz", "k_B T"),
            ("gibbs", "k_B T"),
            ("entropy", "k_B"),
            ("energy", "k_B T"),
            ("enthalpy", "k_B T"),
        ),
        evaluate=_eval_virial_thermo,
        prepare=_prepare_virial_model,
        model_keys=("model", "d", "alpha", "amps", "c"),
    ),
    "classify": _Quantity(
        axis_ok=("sqrt_beta", "beta_log_beta", "beta"),
        required=("d",),
        defaults={"sqrt_beta": 0.0, "beta_log_beta": 0.0, "beta": 0.0},
        outputs=(("verdict", ""), ("limit", "energy volume")),
        evaluate=_eval_classify,
        prepare=_prepare_classify,
        model_keys=("extra",),
    ),
}

# quantities reachable from a sweep spec; the CLI-only helpers stay out
SWEEPABLE = frozenset(REGISTRY) - {"anyon-semion"}


# ---------------------------------------------------------------------------
# Sweep engine


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH", "")
    if not epoch:
        return ""
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()


def _metadata(spec: SweepSpec, opts: Mapping) -> dict:
    return {
        "tool": "lowdgas",
        "version": __version__,
        "timestamp": _timestamp(),
        "quantity": spec.quantity,
        "axes": [
            {
                "name": a.name,
                "start": a.start,
                "stop": a.stop,
                "count": a.count,
                "spacing": a.spacing,
            }
            for a in spec.axes
        ],
        "fixed": {k: spec.fixed[k] for k in sorted(spec.fixed)},
        "config": {
            "format": spec.format,
            "tol": opts.get("tol"),
            "nodes": opts.get("nodes"),
        },
    }


def _check_parameters(spec: SweepSpec, q: _Quantity) -> None:
    axis_names = [a.name for a in spec.axes]
    for name in axis_names:
        if name not in q.axis_ok:
            raise SpecError(
                f"{spec.quantity}: {name} cannot be swept "
                f"(axes: {', '.join(q.axis_ok)})"
            )
    known = set(q.required) | set(q.defaults) | set(q.axis_ok) | set(q.model_keys)
    for name in spec.fixed:
        if name not in known:
            raise SpecError(f"{spec.quantity}: unknown parameter {name!r}")
    have = set(axis_names) | set(spec.fixed) | set(q.defaults) | set(q.model_keys)
    missing = [name for name in q.required if name not in have]
    if missing:
        raise SpecError(f"{spec.quantity}: missing parameter(s) {', '.join(missing)}")


def run_sweep(spec: SweepSpec, opts: Mapping | None = None, jobs: int = 1) -> ResultTable:
    """Evaluate the quantity on the grid.  Points are independent; any
    per-point failure is recorded in that row's ``status`` cell and the
    sweep carries on.  Row order follows the grid (first axis outermost)
    regardless of ``jobs``.
    """
    opts = dict(opts or {})
    q = REGISTRY[spec.quantity]
    _check_parameters(spec, q)
    context = q.prepare(spec.fixed) if q.prepare is not None else {}

    base = {k: v for k, v in q.defaults.items()}
    for key, value in spec.fixed.items():
        if key in q.model_keys:
            continue
        try:
            base[key] = float(value)
        except (TypeError, ValueError) as err:
            raise SpecError(f"parameter {key} must be numeric, got {value!r}") from err

    grids = [axis.values() for axis in spec.axes]
    if len(grids) == 1:
        points = [(v,) for v in grids[0]]
    else:
        points = [(u, v) for u in grids[0] for v in grids[1]]
    axis_names = [a.name for a in spec.axes]

    def evaluate(point: tuple) -> tuple:
        params = dict(base)
        params.update(zip(axis_names, point))
        try:
            outs = q.evaluate(params, opts, context)
            return point + tuple(outs) + ("ok",)
        except Exception as err:  # recorded per row, the sweep must finish
            blanks = ("",) * len(q.outputs)
            note = f"{type(err).__name__}: {err}".replace("\n", "; ")
            return point + blanks + (note,)

    if jobs > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = tuple(pool.map(evaluate, points))
    else:
        rows = tuple(evaluate(pt) for pt in points)

    columns = tuple((name, "") for name in axis_names) + q.outputs + (("status", ""),)
    return ResultTable(columns=columns, rows=rows, metadata=_metadata(spec, opts))


# ---------------------------------------------------------------------------
# Rendering and parsing


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return _FLOAT_FMT % float(value)


def _header_name(name: str, unit: str) -> str:
    return f"{name}[{unit}]" if unit else name


def render_csv(table: ResultTable) -> str:
    """Comment-prefixed metadata, a ``name[unit]`` header row, then one
    RFC-4180 row per grid point with LF endings and 17-digit floats.
    """
    buf = io.StringIO()
    meta = json.dumps(table.metadata, sort_keys=True, separators=(",", ":"))
    buf.write(f"# lowdgas {__version__}\n")
    buf.write(f"# metadata: {meta}\n")
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow([_header_name(n, u) for n, u in table.columns])
    for row in table.rows:
        writer.writerow([_format_cell(c) for c in row])
    return buf.getvalue()


def render_json(table: ResultTable) -> str:
    payload = {
        "metadata": table.metadata,
        "columns": [{"name": n, "unit": u} for n, u in table.columns],
        "rows": [list(row) for row in table.rows],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit(table: ResultTable, format: str, destination: str | None = None) -> None:
    """Write the table (stdout when ``destination`` is None)."""
    if format == "csv":
        text = render_csv(table)
    elif format == "json":
        text = render_json(table)
    else:
        raise SpecError(f"format must be csv or json, got {format!r}")
    if destination is None:
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_cell(text: str):
    if text == "" or text == "ok" or ":" in text:
        return text
    try:
        return float(text)
    except ValueError:
        return text


def load_table(path: str) -> ResultTable:
    """Parse back an emitted file (format detected from the content)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return ResultTable(
            columns=tuple((c["name"], c["unit"]) for c in payload["columns"]),
            rows=tuple(tuple(row) for row in payload["rows"]),
            metadata=payload["metadata"],
        )
    metadata: dict = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("# metadata: "):
            metadata = json.loads(line[len("# metadata: ") :])
        elif not line.startswith("#"):
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    columns = []
    for cell in header:
        if cell.endswith("]") and "[" in cell:
            name, unit = cell[:-1].split("[", 1)
        else:
            name, unit = cell, ""
        columns.append((name, unit))
    rows = tuple(tuple(_parse_cell(c) for c in row) for row in reader if row)
    return ResultTable(columns=tuple(columns), rows=rows, metadata=metadata)


def _write_gnuplot(table: ResultTable, csv_path: str) -> str:
    """Companion plot script next to the CSV; returns its path."""
    script = csv_path + ".gp"
    names = [n for n, _ in table.columns]
    ycol = min(len(table.columns) - 1, 2) if len(table.columns) > 2 else 2
    with open(script, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            "\n".join(
                [
                    f"# plot script for {os.path.basename(csv_path)}",
                    'set datafile separator ","',
                    "set key autotitle columnhead",
                    f'set xlabel "{names[0]}"',
                    f'plot "{os.path.basename(csv_path)}" using 1:{ycol} with lines',
                    "",
                ]
            )
        )
    return script


# ---------------------------------------------------------------------------
# Specfile / config parsing


def _parse_axis_line(value: str, where: str) -> Axis:
    parts = value.split()
    if len(parts) != 5:
        raise SpecError(
            f"{where}: axis wants 'name linear|log start stop count', got {value!r}"
        )
    name, spacing, start, stop, count = parts
    try:
        return Axis(
            name=name,
            start=float(start),
            stop=float(stop),
            count=int(count),
            spacing=spacing,
        )
    except ValueError as err:
        raise SpecError(f"{where}: {err}") from err


def _coerce(value: str):
    try:
        return float(value)
    except ValueError:
        return value


def parse_specfile(text: str, name: str = "<spec>") -> SweepSpec:
    """Key-value sweep description::

        quantity = ll-shift
        axis     = gamma log 0.1 100 60
        tau      = 0
        out      = fig1.csv
        format   = csv

    ``axis`` may appear twice; every other key that is not ``quantity``,
    ``out`` or ``format`` becomes a fixed parameter.
    """
    quantity = None
    axes: list[Axis] = []
    fixed: dict[str, object] = {}
    output = None
    fmt = "csv"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{name}:{lineno}"
        if "=" not in line:
            raise SpecError(f"{where}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not value:
            raise SpecError(f"{where}: empty value for {key!r}")
        if key == "quantity":
            quantity = value
        elif key == "axis":
            if len(axes) == 2:
                raise SpecError(f"{where}: at most two axes")
            axes.append(_parse_axis_line(value, where))
        elif key in ("out", "output"):
            output = value
        elif key == "format":
            fmt = value
        else:
            fixed[key] = _coerce(value)
    if quantity is None:
        raise SpecError(f"{name}: missing 'quantity ='")
    if not axes:
        raise SpecError(f"{name}: missing 'axis ='")
    return SweepSpec(
        quantity=quantity, axes=tuple(axes), fixed=fixed, output=output, format=fmt
    )


_CONFIG_KEYS = ("format", "tol", "nodes", "jobs")


def _parse_config(text: str, name: str) -> dict:
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SpecError(f"{name}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise SpecError(
                f"{name}:{lineno}: unknown config key {key!r} "
                f"(one of: {', '.join(_CONFIG_KEYS)})"
            )
        if key == "format":
            out[key] = value
        elif key == "tol":
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


# ---------------------------------------------------------------------------
# Command line


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are spec errors: exit 1
        self.print_usage(sys.stderr)
        self.exit(EXIT_SPEC, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--tol", type=float, default=None, help="solver tolerance")
    common.add_argument("--nodes", type=int, default=None, help="initial grid size")
    common.add_argument("--jobs", type=int, default=None, help="parallel workers")
    common.add_argument("--config", metavar="PATH", help="key=value defaults file")
    common.add_argument(
        "--gnuplot",
        action="store_true",
        help="also write a plot script next to a CSV output file",
    )
    return common


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("power-law", "delta-gas"), default="power-law")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--amps", default=None, help="comma-separated amplitudes")
    p.add_argument("--c", type=float, default=None, help="delta-gas repulsion strength")


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="lowdgas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lowdgas {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    ll = groups.add_parser("ll", help="delta-interacting 1d Bose gas")
    ll_ops = ll.add_subparsers(dest="op", required=True)
    p = ll_ops.add_parser("ground", parents=[common])
    p.add_argument("--gamma", type=float, required=True)
    for op in ("tba", "shift", "b2"):
        p = ll_ops.add_parser(op, parents=[common])
        p.add_argument("--gamma", type=float, required=True)
        p.add_argument("--tau", type=float, required=True)

    anyon = groups.add_parser("anyon", help="2d statistics gas, one channel")
    anyon_ops = anyon.add_subparsers(dest="op", required=True)
    p = anyon_ops.add_parser("b2", parents=[common])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sigma", type=int, choices=(-1, 1), required=True)
    p.add_argument("--eps", type=float, required=True)
    for op in ("shift", "semion"):
        p = anyon_ops.add_parser(op, parents=[common])
        if op == "shift":
            p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--sigma", type=int, choices=(-1, 1), required=True)
        p.add_argument("--eps", type=float, required=True)
        p.add_argument("--x", type=float, required=True)

    nacs = groups.add_parser("nacs", help="isospin-channel statistics gas")
    nacs_ops = nacs.add_subparsers(dest="op", required=True)
    for op in ("b2", "shift", "channels"):
        p = nacs_ops.add_parser(op, parents=[common])
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--l", type=float, required=True)
        if op != "channels":
            p.add_argument("--eps", type=float, required=True)
            p.add_argument("--sigma", type=int, choices=(-1, 1), required=True)
        if op == "shift":
            p.add_argument("--x", type=float, required=True)

    virial = groups.add_parser("virial", help="d-dimensional virial thermodynamics")
    virial_ops = virial.add_subparsers(dest="op", required=True)
    p = virial_ops.add_parser("thermo", parents=[common])
    _add_model_flags(p)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p = virial_ops.add_parser("classify", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sqrt-beta", type=float, default=0.0)
    p.add_argument("--beta-log-beta", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument(
        "--extra",
        action="append",
        default=[],
        metavar="COEFF,POWER,LOGPOWER",
        help="additional expansion term (repeatable)",
    )
    p = virial_ops.add_parser("check-scaling", parents=[common])
    _add_model_flags(p)
    p.add_argument("--temps", required=True, help="comma-separated temperatures")
    p.add_argument("--rtol", type=float, default=1e-9)

    p = groups.add_parser("sweep", parents=[common], help="run a sweep specfile")
    p.add_argument("specfile")
    return parser


def _effective_opts(ns: argparse.Namespace) -> dict:
    opts = {"format": "csv", "tol": None, "nodes": None, "jobs": 1}
    if getattr(ns, "config", None):
        with open(ns.config, "r", encoding="utf-8") as fh:
            opts.update(_parse_config(fh.read(), ns.config))
    for key in ("format", "tol", "nodes", "jobs"):
        flag = getattr(ns, key, None)
        if flag is not None:
            opts[key] = flag
    return opts


def _single_point(quantity: str, ns: argparse.Namespace, opts: Mapping) -> ResultTable:
    q = REGISTRY[quantity]
    params = {}
    for name in q.required:
        params[name] = getattr(ns, name)
    context = {}
    outs = q.evaluate(params, opts, context)
    columns = (
        tuple((name, "") for name in q.required)
        + q.outputs
        + (("status", ""),)
    )
    row = tuple(float(params[name]) for name in q.required) + tuple(outs) + ("ok",)
    metadata = {
        "tool": "lowdgas",
        "version": __version__,
        "timestamp": _timestamp(),
        "quantity": quantity,
        "fixed": {k: float(v) for k, v in sorted(params.items())},
        "config": {"format": opts["format"], "tol": opts["tol"], "nodes": opts["nodes"]},
    }
    return ResultTable(columns=columns, rows=(row,), metadata=metadata)


def _channels_table(ns: argparse.Namespace, opts: Mapping) -> ResultTable:
    sys_ = NACSSystem.isotropic(ns.k, ns.l, 1.0, +1)
    w = channel_weights(sys_)
    rows = tuple(
        (
            float(j),
            w.omega[j],
            w.delta[j],
            w.gamma[j],
            w.nu[j],
            "bosonic" if w.bosonic[j] else "fermionic",
            "ok",
        )
        for j in range(sys_.channel_count)
    )
    columns = (
        ("j", ""),
        ("omega", ""),
        ("delta", ""),
        ("gamma", ""),
        ("nu", ""),
        ("kind", ""),
        ("status", ""),
    )
    metadata = {
        "tool": "lowdgas",
        "version": __version__,
        "timestamp": _timestamp(),
        "quantity": "nacs-channels",
        "fixed": {"k": float(ns.k), "l": float(ns.l)},
        "config": {"format": opts["format"], "tol": None, "nodes": None},
    }
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def _scaling_table(ns: argparse.Namespace, opts: Mapping) -> ResultTable:
    fixed = {"model": ns.model, "d": ns.d, "alpha": ns.alpha, "amps": ns.amps, "c": ns.c}
    fixed = {k: v for k, v in fixed.items() if v is not None}
    model = _prepare_virial_model(fixed)["model"]
    try:
        temps = [float(t) for t in ns.temps.split(",") if t.strip()]
    except ValueError as err:
        raise SpecError(f"bad temperature list {ns.temps!r}") from err
    try:
        report = check_scale_invariance(model, temps, rtol=ns.rtol)
    except ValueError as err:
        raise SpecError(str(err)) from err
    rows = tuple(
        (
            float(k + 1),
            report.relative_spread[k],
            "pass" if (k + 1) not in report.violations else "fail",
            "ok",
        )
        for k in range(len(report.relative_spread))
    )
    columns = (("order_k", ""), ("relative_spread", ""), ("scaling", ""), ("status", ""))
    metadata = {
        "tool": "lowdgas",
        "version": __version__,
        "timestamp": _timestamp(),
        "quantity": "virial-check-scaling",
        "fixed": {k: str(v) for k, v in sorted(fixed.items())},
        "config": {"format": opts["format"], "tol": None, "nodes": None},
        "rtol": ns.rtol,
        "temps": temps,
    }
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def _parse_extra_terms(specs: Sequence[str]) -> tuple:
    terms = []
    for spec in specs:
        parts = spec.split(",")
        if len(parts) != 3:
            raise SpecError(f"--extra wants COEFF,POWER,LOGPOWER, got {spec!r}")
        try:
            terms.append((float(parts[0]), float(parts[1]), int(parts[2])))
        except ValueError as err:
            raise SpecError(f"bad --extra term {spec!r}") from err
    return tuple(terms)


def _dispatch(ns: argparse.Namespace, opts: Mapping) -> ResultTable:
    group, op = ns.group, getattr(ns, "op", None)
    if group == "sweep":
        with open(ns.specfile, "r", encoding="utf-8") as fh:
            spec = parse_specfile(fh.read(), name=ns.specfile)
        if ns.out is not None:
            spec = SweepSpec(spec.quantity, spec.axes, spec.fixed, ns.out, spec.format)
        if ns.format is not None:
            spec = SweepSpec(spec.quantity, spec.axes, spec.fixed, spec.output, ns.format)
        table = run_sweep(spec, opts, jobs=int(opts.get("jobs") or 1))
        ns.out = spec.output
        opts["format"] = spec.format if ns.format is None else ns.format
        return table
    if group == "nacs" and op == "channels":
        return _channels_table(ns, opts)
    if group == "virial" and op == "check-scaling":
        return _scaling_table(ns, opts)
    if group == "virial" and op == "thermo":
        fixed = {
            "model": ns.model,
            "d": ns.d,
            "alpha": ns.alpha,
            "amps": ns.amps,
            "c": ns.c,
        }
        fixed = {k: v for k, v in fixed.items() if v is not None}
        context = _prepare_virial_model(fixed)
        q = REGISTRY["virial-thermo"]
        outs = q.evaluate({"rho": ns.rho, "T": ns.T}, opts, context)
        columns = (("rho", ""), ("T", "")) + q.outputs + (("status", ""),)
        metadata = {
            "tool": "lowdgas",
            "version": __version__,
            "timestamp": _timestamp(),
            "quantity": "virial-thermo",
            "fixed": {k: str(v) for k, v in sorted(fixed.items())},
            "config": {
                "format": opts["format"],
                "tol": opts["tol"],
                "nodes": opts["nodes"],
            },
        }
        return ResultTable(
            columns=columns,
            rows=((float(ns.rho), float(ns.T)) + tuple(outs) + ("ok",),),
            metadata=metadata,
        )
    if group == "virial" and op == "classify":
        shape = B2SmallBetaShape(
            sqrt_beta=ns.sqrt_beta,
            beta_log_beta=ns.beta_log_beta,
            beta=ns.beta,
            extra=_parse_extra_terms(ns.extra),
        )
        out = classify_shift(shape, ns.d)
        limit = out.limit_value if out.limit_value is not None else ""
        columns = (
            ("d", ""),
            ("sqrt_beta", ""),
            ("beta_log_beta", ""),
            ("beta", ""),
            ("verdict", ""),
            ("limit", "energy volume"),
            ("status", ""),
        )
        row = (
            float(ns.d),
            ns.sqrt_beta,
            ns.beta_log_beta,
            ns.beta,
            out.verdict,
            limit,
            "ok",
        )
        metadata = {
            "tool": "lowdgas",
            "version": __version__,
            "timestamp": _timestamp(),
            "quantity": "classify",
            "fixed": {
                "d": float(ns.d),
                "sqrt_beta": ns.sqrt_beta,
                "beta_log_beta": ns.beta_log_beta,
                "beta": ns.beta,
                "extra": [list(t) for t in _parse_extra_terms(ns.extra)],
            },
            "config": {"format": opts["format"], "tol": None, "nodes": None},
        }
        return ResultTable(columns=columns, rows=(row,), metadata=metadata)
    quantity = f"{group}-{op}"
    return _single_point(quantity, ns, opts)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    try:
        opts = _effective_opts(ns)
        table = _dispatch(ns, opts)
    except SpecError as err:
        print(f"lowdgas: error: {err}", file=sys.stderr)
        return EXIT_SPEC
    except FileNotFoundError as err:
        # a missing spec or config file is a spec problem, not an I/O one
        print(f"lowdgas: error: {err}", file=sys.stderr)
        return EXIT_SPEC
    except ValueError as err:
        print(f"lowdgas: error: {err}", file=sys.stderr)
        return EXIT_SPEC
    out = getattr(ns, "out", None)
    fmt = opts["format"]
    try:
        emit(table, fmt, out)
        if ns.gnuplot and fmt == "csv" and out:
            _write_gnuplot(table, out)
    except OSError as err:
        print(f"lowdgas: error: cannot write output: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_SOLVER if table.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
