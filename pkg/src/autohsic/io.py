"""
Series files, run configurations and machine-readable reports.

Series file (UTF-8, LF line endings)::

    # comment lines start with '#'
    space: vector 3            | space: matrix 2 2 | space: functional 101
    grid: 0,0.1,...,1          (optional, functional only; default uniform)
    0.12,-1.3,0.8              one comma-separated flat block per time index
    ...

Matrix rows hold the row-major entries.  Reports are JSON objects carrying a
``schema`` field; they are written with sorted keys and two-space indentation
so that parsing and re-serializing reproduces them byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .bootstrap import TestReport, TestResult
from .diagnostics import DiagnosticReport
from .errors import ConfigError
from .spaces import KernelSpec, ObjectSeries, SpaceDescriptor, SpaceKind

REPORT_SCHEMA = "autohsic.report/1"


# -- series files ----------------------------------------------------------

def _parse_space(spec: str, line: int) -> SpaceDescriptor:
    parts = spec.split()
    try:
        kind = SpaceKind(parts[0])
        dims = [int(p) for p in parts[1:]]
    except (ValueError, IndexError):
        raise ConfigError(f"malformed space declaration {spec!r}", line)
    wanted = {SpaceKind.VECTOR: 1, SpaceKind.MATRIX: 2, SpaceKind.FUNCTIONAL: 1}
    if len(dims) != wanted[kind] or min(dims) < 1:
        raise ConfigError(f"space {kind.value} needs {wanted[kind]} positive "
                          f"integer size(s), got {spec!r}", line)
    if kind is SpaceKind.VECTOR:
        return SpaceDescriptor.vector(dims[0])
    if kind is SpaceKind.MATRIX:
        return SpaceDescriptor.matrix(*dims)
    if dims[0] < 2:
        raise ConfigError("a functional grid needs at least 2 points", line)
    return SpaceDescriptor.uniform_grid(dims[0])


def _parse_row(text: str, width: int, line: int) -> list[float]:
    fields = text.split(",")
    if len(fields) != width:
        raise ConfigError(f"expected {width} values, found {len(fields)}", line)
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise ConfigError(f"non-numeric value in row {text!r}", line)
    if not all(np.isfinite(values)):
        raise ConfigError("NaN or infinite value", line)
    return values


def parse_series(text: str) -> ObjectSeries:
    """Parse series-file text; errors carry the 1-based line number."""
    space = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if space is None:
            if not line.startswith("space:"):
                raise ConfigError("first data line must be a 'space:' header",
                                  lineno)
            space = _parse_space(line[len("space:"):], lineno)
            continue
        if line.startswith("grid:"):
            if space.kind is not SpaceKind.FUNCTIONAL or rows:
                raise ConfigError("'grid:' must directly follow a functional "
                                  "space header", lineno)
            grid = _parse_row(line[len("grid:"):], space.size, lineno)
            try:
                space = SpaceDescriptor.functional(grid)
            except ValueError as exc:
                raise ConfigError(str(exc), lineno)
            continue
        rows.append(_parse_row(line, space.size, lineno))
    if space is None:
        raise ConfigError("missing 'space:' header", 1)
    if not rows:
        raise ConfigError("series file has no observations")
    return ObjectSeries(space, np.array(rows))


def read_series(path) -> ObjectSeries:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read series file: {exc}")
    return parse_series(text)


def format_series(series: ObjectSeries) -> str:
    space = series.space
    if space.kind is SpaceKind.MATRIX:
        header = f"space: matrix {space.shape[0]} {space.shape[1]}"
    else:
        header = f"space: {space.kind.value} {space.size}"
    lines = [header]
    if space.kind is SpaceKind.FUNCTIONAL:
        uniform = np.array_equal(space.grid, np.linspace(0, 1, space.size))
        if not uniform:
            lines.append("grid: " + ",".join(repr(g) for g in space.grid))
    lines += [",".join(repr(float(v)) for v in row) for row in series.data]
    return "\n".join(lines) + "\n"


def write_series(path, series: ObjectSeries):
    Path(path).write_text(format_series(series), encoding="utf-8")


# -- run configurations ----------------------------------------------------

_KERNEL = {"enum": ["gaussian", "laplacian", "brownian"]}
_BANDWIDTH = {"anyOf": [{"const": "median"},
                        {"type": "number", "exclusiveMinimum": 0}]}
_SEED = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}

_COMMON = {
    "kernel": _KERNEL,
    "lag_kernel": _KERNEL,
    "bandwidth": _BANDWIDTH,
    "lag_bandwidth": _BANDWIDTH,
    "M": {"type": "integer", "minimum": 1},
    "B": {"type": "integer", "minimum": 1},
    "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "seed": _SEED,
    "threads": {"type": "integer", "minimum": 1},
    "include_replicates": {"type": "boolean"},
    "output": {"type": "string"},
}

_DGP = {
    "type": "object",
    "properties": {
        "type": {"enum": ["iid-normal", "iid-t", "product-ma", "var1",
                          "component-garch", "functional-iid",
                          "functional-arch", "functional-product-ma",
                          "matrix-garch", "garch-egp"]},
        "d": {"type": "integer", "minimum": 1},
        "nu": {"type": "number", "exclusiveMinimum": 0},
        "rho": {"type": "number"},
        "c": {"type": "number", "minimum": 0},
        "egp": {"enum": [1, 2, 3]},
        "innovation": {"enum": ["normal", "t"]},
        "df": {"type": "number", "exclusiveMinimum": 0},
        "grid_points": {"type": "integer", "minimum": 2},
    },
    "required": ["type"],
    "additionalProperties": False,
}

SCHEMAS = {
    "test": {"type": "object", "properties": dict(_COMMON),
             "additionalProperties": False},
    "diagnose": {"type": "object",
                 "properties": dict(_COMMON,
                                    model={"enum": ["garch11",
                                                    "constant-variance"]},
                                    burn_in={"type": "integer", "minimum": 0}),
                 "additionalProperties": False},
    "simulate": {
        "type": "object",
        "properties": {
            "preset": {"type": "string"},
            "dgp": _DGP,
            "T": {"type": "integer", "minimum": 10},
            "R": {"type": "integer", "minimum": 1},
            "B": {"type": "integer", "minimum": 1},
            "alpha": _COMMON["alpha"],
            "lags": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "portmanteau": {"type": "array",
                            "items": {"type": "integer", "minimum": 1}},
            "kernels": {"type": "array", "items": _KERNEL, "minItems": 1},
            "seed": _SEED,
            "threads": {"type": "integer", "minimum": 1},
            "grid_points": {"type": "integer", "minimum": 2},
            "output": {"type": "string"},
        },
        "additionalProperties": False,
    },
}

DEFAULTS = {
    "test": {"kernel": "gaussian", "bandwidth": "median", "M": 3, "B": 500,
             "alpha": 0.05, "seed": 0, "threads": 1,
             "include_replicates": False},
    "diagnose": {"kernel": "gaussian", "bandwidth": "median", "M": 3, "B": 500,
                 "alpha": 0.05, "seed": 0, "threads": 1,
                 "include_replicates": False, "model": "garch11",
                 "burn_in": 200},
    "simulate": {"R": 1000, "B": 500, "alpha": 0.05, "seed": 0, "threads": 1,
                 "grid_points": 101, "lags": [1, 3], "portmanteau": [3, 6],
                 "kernels": ["laplacian", "gaussian", "brownian"]},
}


def validate_config(command: str, config: dict) -> dict:
    """Schema-check ``config`` for ``command`` and fill in defaults."""
    try:
        jsonschema.validate(config, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}")
    return {**DEFAULTS[command], **config}


def load_config(path, command: str) -> dict:
    if path is None:
        return validate_config(command, {})
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno)
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object", 1)
    return validate_config(command, config)


def kernel_specs(config: dict) -> tuple[KernelSpec, KernelSpec]:
    k = KernelSpec(config["kernel"], config.get("bandwidth", "median"))
    l = KernelSpec(config.get("lag_kernel", config["kernel"]),
                   config.get("lag_bandwidth", config.get("bandwidth", "median")))
    return k, l


# -- reports ---------------------------------------------------------------

def _kernel_dict(spec: KernelSpec, bandwidth) -> dict:
    return {"family": spec.family.value,
            "bandwidth_policy": spec.bandwidth if spec.bandwidth == "median"
            else "fixed",
            "bandwidth": bandwidth}


def _result_dict(res: TestResult, include_replicates: bool) -> dict:
    out = {"name": f"{res.name}_{res.lag}", "lag": res.lag,
           "statistic": res.statistic, "critical_value": res.critical_value,
           "p_value": res.p_value, "reject": bool(res.reject)}
    if include_replicates:
        out["replicates"] = [float(v) for v in res.replicates]
    return out


def report_to_dict(report: TestReport | DiagnosticReport,
                   include_replicates: bool = False) -> dict:
    """JSON-ready representation of a test or diagnostic report."""
    cfg = report.config
    out = {
        "schema": REPORT_SCHEMA,
        "kind": "diagnostic" if isinstance(report, DiagnosticReport) else "test",
        "T": report.T,
        "M": report.M,
        "B": cfg.B,
        "alpha": cfg.alpha,
        "seed": cfg.seed,
        "weights": cfg.weights,
        "scale": "T",
        "k_kernel": _kernel_dict(report.k_spec, report.k_bandwidth),
        "l_kernel": _kernel_dict(report.l_spec, report.l_bandwidth),
        "per_lag": [_result_dict(r, include_replicates) for r in report.per_lag],
        "portmanteau": _result_dict(report.portmanteau, include_replicates),
    }
    if isinstance(report, DiagnosticReport):
        omega, alpha, beta = report.params.as_tuple()
        out["model"] = {"name": report.model, "omega": omega, "alpha": alpha,
                        "beta": beta}
        out["refit_failures"] = report.refit_failures
    return out


def dumps_report(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema") != REPORT_SCHEMA:
        raise ConfigError(f"unsupported report schema {data.get('schema')!r}")
    return data


def format_summary(report: TestReport | DiagnosticReport) -> str:
    """Human-readable table of statistics, critical values and decisions."""
    cfg = report.config
    title = ("residual bootstrap diagnostic"
             if isinstance(report, DiagnosticReport) else "wild bootstrap test")
    lines = [f"AutoHSIC {title}: T={report.T} B={cfg.B} alpha={cfg.alpha} "
             f"seed={cfg.seed}"]
    for side, spec, bw in (("k", report.k_spec, report.k_bandwidth),
                           ("l", report.l_spec, report.l_bandwidth)):
        bw_text = "n/a" if bw is None else f"{bw:.6g}"
        lines.append(f"  {side}-kernel {spec.family.value} (bandwidth {bw_text})")
    if isinstance(report, DiagnosticReport):
        omega, alpha, beta = report.params.as_tuple()
        lines.append(f"  fitted {report.model}: omega={omega:.6g} "
                     f"alpha={alpha:.6g} beta={beta:.6g}")
    lines.append(f"  {'test':<6}{'T*stat':>14}{'critical':>14}{'p-value':>10}"
                 "  decision")
    for res in report.per_lag + (report.portmanteau,):
        lines.append(f"  {res.name + '_' + str(res.lag):<6}{res.statistic:>14.6g}"
                     f"{res.critical_value:>14.6g}{res.p_value:>10.4f}  "
                     f"{'reject' if res.reject else 'accept'}")
    return "\n".join(lines) + "\n"
