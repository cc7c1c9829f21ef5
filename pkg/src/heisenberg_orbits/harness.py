"""Run configuration, suite orchestration and report files.

``report.json`` schema (``heisenberg-orbits/report/v1``)::

    {
      "schema": "heisenberg-orbits/report/v1",
      "config": {lambda, n, grid_points, grid_extent, grid_rule, suites, seed, tolerances, ...},
      "passed": bool,
      "suites": {
        "<suite>": {"passed": bool,
                    "checks": [{"name", "anchor", "residual", "tolerance",
                                "comparison", "passed", "note"}]}
      }
    }

Wall times are kept out of the JSON so that equal configurations give
byte-identical reports; they go to ``residuals.csv``.
"""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .grid import GridSpec
from .groups import GroupElement, Kind, ModelParams
from .orbits import classify_orbit, orbit_trace
from .verification import DEFAULT_TOLERANCES, SUITES, SuiteResult, run_suite

LOGGER = logging.getLogger(__name__)

__all__ = ["RunConfig", "SuiteReport", "run", "write_report", "emit_orbit_traces",
           "load_config_file", "SCHEMA"]

SCHEMA = "heisenberg-orbits/report/v1"


@dataclass(frozen=True)
class RunConfig:
    lam: float = 0.0
    n: int = 1
    grid_points: int = 128
    grid_extent: float = 6.0
    grid_rule: str = "trapezoid"
    suites: tuple[str, ...] = tuple(SUITES)
    seed: int = 1
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    parallel: bool = False
    samples: int = 1000
    pairs: int = 500
    omega_samples: int = 200
    fourier_functions: int = 20
    r_nodes: int = 32

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suites {unknown}; known: {sorted(SUITES)}")
        bad = [k for k in self.tolerances if k not in DEFAULT_TOLERANCES]
        if bad:
            raise ValueError(f"unknown tolerance keys {bad}")
        ModelParams(self.lam, self.n)
        GridSpec(self.grid_extent, self.grid_points, self.grid_rule, self.n)

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.lam, self.n)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.grid_extent, self.grid_points, self.grid_rule, self.n)

    @property
    def tol(self) -> dict[str, float]:
        return {**DEFAULT_TOLERANCES, **self.tolerances}

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("out", "parallel")}
        d["lambda"] = d.pop("lam")
        d["suites"] = list(self.suites)
        d["tolerances"] = dict(sorted(self.tol.items()))
        return d


_FILE_KEYS = {
    "lambda": ("lam", float), "lam": ("lam", float), "n": ("n", int),
    "grid-n": ("grid_points", int), "grid_points": ("grid_points", int),
    "grid-extent": ("grid_extent", float), "grid_extent": ("grid_extent", float),
    "grid-rule": ("grid_rule", str), "grid_rule": ("grid_rule", str),
    "seed": ("seed", int), "out": ("out", str), "parallel": ("parallel", None),
    "samples": ("samples", int), "pairs": ("pairs", int),
    "omega-samples": ("omega_samples", int), "fourier-functions": ("fourier_functions", int),
    "r-nodes": ("r_nodes", int),
}


def _as_bool(v: str) -> bool:
    return v.strip().lower() in ("1", "true", "yes", "on")


def load_config_file(path: str | Path) -> dict:
    """Parse a flat ``key = value`` file into :class:`RunConfig` keyword arguments.

    ``suite`` may repeat or hold a comma-separated list; ``tolerance.KEY`` sets
    a tolerance.  Blank lines and ``#`` comments are ignored.
    """
    kw: dict = {}
    suites: list[str] = []
    tols: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in ("suite", "suites"):
            suites += [s.strip() for s in val.split(",") if s.strip()]
        elif key.startswith("tolerance."):
            tols[key.split(".", 1)[1]] = float(val)
        elif key in _FILE_KEYS:
            name, conv = _FILE_KEYS[key]
            kw[name] = _as_bool(val) if conv is None else conv(val)
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if suites:
        kw["suites"] = tuple(suites)
    if tols:
        kw["tolerances"] = tols
    return kw


@dataclass
class SuiteReport:
    config: RunConfig
    results: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def checks(self):
        for r in self.results:
            for c in r.checks:
                yield r.name, c

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "config": self.config.as_dict(),
            "passed": self.passed,
            "suites": {
                r.name: {"passed": r.passed, "checks": [c.as_dict() for c in r.checks]}
                for r in self.results
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"

    def summary(self) -> str:
        lines = []
        for suite, c in self.checks():
            res = "n/a" if c.residual is None else f"{c.residual:.3e}"
            op = "<=" if c.comparison == "le" else ">="
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {suite:<16} {c.name:<34} "
                         f"{res} {op} {c.tolerance:.1e}")
        n_fail = sum(not c.passed for _, c in self.checks())
        lines.append(f"{'PASSED' if self.passed else 'FAILED'}: "
                     f"{sum(1 for _ in self.checks()) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines)


def _run_one(args):
    name, cfg = args
    return run_suite(name, cfg)


def run(config: RunConfig) -> SuiteReport:
    """Run the configured suites; write the report files if ``config.out`` is set."""
    jobs = [(name, config) for name in config.suites]
    if config.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    report = SuiteReport(config, results)
    if config.out is not None:
        write_report(report, config.out)
    return report


def write_report(report: SuiteReport, out: str | Path) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    with open(out / "residuals.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "check", "anchor", "residual", "tolerance", "comparison",
                    "passed", "wall_time_s", "note"])
        for suite, c in report.checks():
            w.writerow([suite, c.name, c.anchor, "" if c.residual is None else repr(c.residual),
                        c.tolerance, c.comparison, int(c.passed), f"{c.wall_time:.4f}", c.note])
    with open(out / "convergence.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "check", "step", "key", "value"])
        for r in report.results:
            for row in r.convergence:
                for k, v in row.items():
                    if k not in ("check", "step"):
                        w.writerow([r.name, row["check"], row["step"], k, repr(v)])
    emit_orbit_traces(report.config.params, default_trace_points(report.config.n),
                      out / "traces.csv")
    LOGGER.info("report written to %s", out)
    return out


def default_trace_points(n: int = 1) -> list[np.ndarray]:
    """Base points ``(p, q, r, s)`` whose orbits are traced by default."""
    pts = [(1, 1), (1, -1), (-1, 1), (-1, -1), (2, 2), (1, 0), (0, 1), (-1, 0), (0, -1), (0, 0)]
    out = []
    for p, q in pts:
        out.append(np.concatenate([np.full(n, float(p)), np.full(n, float(q)), [0.0, 0.0]]))
    return out


def emit_orbit_traces(params: ModelParams, points, path=None, n_points: int = 65,
                      span: float = 3.0) -> list[list]:
    """Sample orbits on the ``r = s = 0`` plane; optionally write them as CSV.

    Rows are ``(orbit_id, kind, p_1..p_n, q_1..q_n)``.
    """
    n = params.n
    rows = []
    for i, c in enumerate(points):
        mu = GroupElement(Kind.GTILDE, n, np.asarray(c, float))
        kind = classify_orbit(params, mu).kind.value
        for row in orbit_trace(params, mu, n_points, span):
            rows.append([i, kind, *(float(v) for v in row)])
    if path is not None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["orbit", "kind", *[f"p{i + 1}" for i in range(n)],
                        *[f"q{i + 1}" for i in range(n)]])
            w.writerows(rows)
    return rows


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
