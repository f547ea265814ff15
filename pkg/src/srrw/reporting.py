"""Run manifests and campaign reports with deterministic serialization.

Result files (JSON + CSV) are byte-stable: fixed column orders, shortest
round-trip float formatting, sorted JSON keys.  Wall-clock time lives only
in the manifest, so re-running a manifest reproduces result files exactly.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

SCHEMA_MANIFEST = "srrw.manifest/1"
SCHEMA_RESULTS = "srrw.results/1"

# fixed column order per table; schema version SCHEMA_RESULTS
TABLE_COLUMNS = {
    "endpoint": ["n", "replicas", "ks", "mean_scaled", "se_mean", "partial"],
    "endpoint_hist": ["n", "x", "count"],
    "lclt_table": ["n", "x", "hits", "n_phat", "se", "flag"],
    "profile_shape": ["k", "replicas", "median_dev", "p95_dev"],
    "tails": ["m", "event", "threshold", "hits", "replicas", "freq", "se", "upper95"],
    "tail_cross": ["m", "statistic", "walk_value", "walk_se", "rk_value", "rk_se"],
    "inverse_time": ["n", "x", "m", "c", "hits", "replicas", "scaled", "se_scaled", "predicted"],
    "inverse_time_cross": ["n", "x", "m", "c", "walk_freq", "walk_se", "rk_freq", "rk_se"],
    "riemann": ["n", "x", "K", "value", "abs_error"],
    "wterms": ["n", "k", "m", "threshold", "hits", "replicas", "freq", "se", "upper95"],
    "lclt_grid": ["a", "b", "exact", "predicted", "scaled_error"],
    "localtimes": ["x", "l_plus", "l_minus"],
    "walk_summary": ["steps", "final_position", "rho", "lam"],
    "profile": ["y", "mean", "se", "zero_frac"],
    "stationary_law": ["eta", "nu_prob", "r_value", "r_prob"],
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, table_name: str, rows: list) -> None:
    cols = TABLE_COLUMNS.get(table_name)
    if cols is None:
        cols = sorted(rows[0].keys()) if rows else []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in cols])


def dump_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class StatsReport:
    """Estimates, per-point standard errors and pass/fail checks for one campaign."""

    kind: str
    config: dict
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    replicas_total: int = 0
    wall_clock_s: float | None = None

    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_RESULTS,
            "kind": self.kind,
            "config": self.config,
            "tables": self.tables,
            "checks": [asdict(c) for c in self.checks],
            "replicas_total": self.replicas_total,
            "passed": self.passed(),
        }

    def write_outputs(self, outdir) -> list:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        paths = []
        results = outdir / "results.json"
        dump_json(results, self.to_json_dict())
        paths.append(str(results))
        for name, rows in self.tables.items():
            p = outdir / f"{name}.csv"
            write_csv(p, name, rows)
            paths.append(str(p))
        return paths


@dataclass
class RunManifest:
    subcommand: str
    config: dict
    master_seed: int
    code_version: str
    outputs: list = field(default_factory=list)
    wall_clock_s: float | None = None
    schema: str = SCHEMA_MANIFEST

    def write(self, path) -> None:
        dump_json(path, asdict(self))

    @staticmethod
    def load(path) -> "RunManifest":
        with open(path) as fh:
            d = json.load(fh)
        schema = d.pop("schema", SCHEMA_MANIFEST)
        return RunManifest(schema=schema, **d)


class Stopwatch:
    def __init__(self):
        self.t0 = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0
