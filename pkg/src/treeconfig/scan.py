"""End-to-end parameter scans: detect the viable gap interval empirically.

For every gap t on a grid and every eps on a halving ladder the scan
computes the convolved field and its norms, builds the nested good-set
chain to the depth the tree's peel schedule requires, evaluates the
restricted configuration integral, and (at the smallest eps of each t)
searches for an injective tree embedding. The detected interval I is the
longest run of consecutive grid points where every ladder eps succeeded
with a positive restricted integral; the observed extrema of the
restricted integral over I x ladder are reported as the bound candidates.

Scans are deterministic: fixed iteration order, seeded choices only, and
CSV floats written as shortest round-trip decimals, so identical configs
produce byte-identical outputs. TREECONFIG_THREADS > 1 evaluates grid
points in a thread pool; rows are assembled in grid order regardless.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embedding import extract_embedding, feasibility_dp
from .errors import (
    ResourceCapError,
    StageFailureError,
    TreeConfigError,
    ValidationError,
)
from .integrals import DEFAULT_TERM_CAP, IntegralResult, integral_peel
from .kernels import KernelParams, convolve_field, field_norms
from .measures import DEFAULT_ATOM_CAP, AtomicMeasure, IFSSpec, build_ifs_measure
from .pigeonhole import nested_good_sets
from .trees import PeelSchedule, TreeGraph, compute_peel_schedule

CSV_HEADER = "t,eps,l1,l2sq,delta_min,integral_restricted,homomorphism,distinct_witness,status"


@dataclass
class ScanConfig:
    """Inputs and grid for one scan; exactly one measure source is set."""

    tree_file: str | None = None
    measure_file: str | None = None
    ifs_file: str | None = None
    t_min: float = 0.5
    t_max: float = 1.5
    t_steps: int = 11
    eps0: float = 0.1
    halvings: int = 4
    depth: int | None = None  # default: what the peel schedule requires
    seed: int = 0
    out_dir: str = "scan_out"
    atom_cap: int = DEFAULT_ATOM_CAP
    term_cap: int = DEFAULT_TERM_CAP
    node_budget: int = 10**7

    def __post_init__(self):
        if not (self.t_min > 0):
            raise ValidationError(f"t_min must be positive, got {self.t_min}")
        if not (self.t_max >= self.t_min):
            raise ValidationError("t_max must be >= t_min")
        if self.t_steps < 2:
            raise ValidationError(f"t_steps must be >= 2, got {self.t_steps}")
        if not (0 < self.eps0 < self.t_min):
            raise ValidationError(
                f"eps0 must satisfy 0 < eps0 < t_min, got {self.eps0}"
            )
        if self.halvings < 0:
            raise ValidationError("halvings must be >= 0")

    @property
    def t_values(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    @property
    def eps_ladder(self) -> list[float]:
        return [self.eps0 * 2.0**-i for i in range(self.halvings + 1)]

    def to_dict(self) -> dict:
        return {
            "tree_file": self.tree_file,
            "measure_file": self.measure_file,
            "ifs_file": self.ifs_file,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "t_steps": self.t_steps,
            "eps0": self.eps0,
            "halvings": self.halvings,
            "depth": self.depth,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "atom_cap": self.atom_cap,
            "term_cap": self.term_cap,
            "node_budget": self.node_budget,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScanConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValidationError(f"unknown scan config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "ScanConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class ScanRow:
    t: float
    eps: float
    status: str = "ok"
    l1: float | None = None
    l2sq: float | None = None
    delta_min: float | None = None
    stage_deltas: list[float] = field(default_factory=list)
    integral: IntegralResult | None = None
    homomorphism: bool | None = None
    distinct_witness: bool | None = None

    @property
    def succeeded(self) -> bool:
        return (
            self.status == "ok"
            and self.integral is not None
            and self.integral.value > 0.0
        )

    def to_record(self) -> dict:
        return {
            "t": self.t,
            "eps": self.eps,
            "status": self.status,
            "l1": self.l1,
            "l2sq": self.l2sq,
            "delta_min": self.delta_min,
            "stage_deltas": self.stage_deltas,
            "integral_restricted": None if self.integral is None else self.integral.value,
            "stage_log": []
            if self.integral is None
            else [s.to_record() for s in self.integral.stage_log],
            "bounds_witness": None if self.integral is None else self.integral.bounds_witness,
            "homomorphism": self.homomorphism,
            "distinct_witness": self.distinct_witness,
        }


@dataclass
class ScanReport:
    config: ScanConfig
    rows: list[ScanRow]
    interval: tuple[float, float] | None
    c_k: float | None
    C_k: float | None
    measure_label: str = ""
    tree_label: str = ""
    depth: int = 1

    @property
    def interval_t_values(self) -> list[float]:
        if self.interval is None:
            return []
        lo, hi = self.interval
        return [r.t for r in self.rows if lo <= r.t <= hi and r.eps == self.config.eps0]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "measure_label": self.measure_label,
            "tree_label": self.tree_label,
            "depth": self.depth,
            "interval": None if self.interval is None else list(self.interval),
            "c_k": self.c_k,
            "C_k": self.C_k,
            "rows": [r.to_record() for r in self.rows],
        }


def load_measure_for(config: ScanConfig) -> AtomicMeasure:
    if (config.measure_file is None) == (config.ifs_file is None):
        raise ValidationError("set exactly one of measure_file / ifs_file")
    if config.measure_file is not None:
        return AtomicMeasure.load(config.measure_file)
    with open(config.ifs_file) as fh:
        spec = IFSSpec.from_dict(json.load(fh))
    return build_ifs_measure(spec, atom_cap=config.atom_cap)


def _worker_count() -> int:
    raw = os.environ.get("TREECONFIG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError(f"TREECONFIG_THREADS must be an integer, got {raw!r}")


def _scan_one_t(
    t: float,
    config: ScanConfig,
    mu: AtomicMeasure,
    tree: TreeGraph,
    schedule: PeelSchedule,
    depth: int,
) -> list[ScanRow]:
    rows = []
    for eps in config.eps_ladder:
        row = ScanRow(t=float(t), eps=float(eps))
        try:
            params = KernelParams(t=float(t), eps=float(eps))
            f = convolve_field(mu, mu.atoms, params)
            row.l1, row.l2sq = field_norms(f, mu.weights)
            chain = nested_good_sets(mu, params, depth)
            row.stage_deltas = [gs.delta for gs in chain.stages]
            row.delta_min = min(row.stage_deltas)
            row.integral = integral_peel(mu, schedule, params, chain)
        except StageFailureError as exc:
            row.status = f"stage{exc.stage}_failure"
        except ResourceCapError:
            row.status = "cap_exceeded"
        except ValidationError as exc:
            # keep the status CSV-safe
            reason = str(exc).replace(",", ";").replace("\n", " ")
            row.status = f"invalid({reason})"
        rows.append(row)

    # embedding search once per t, at the smallest ladder eps; a witness at
    # the smallest tolerance is a witness at every larger one
    min_eps = config.eps_ladder[-1]
    hom = distinct = False
    try:
        params = KernelParams(t=float(t), eps=float(min_eps))
        tables = feasibility_dp(mu, tree, params)
        hom = tables.root_feasible()
        if hom:
            found = extract_embedding(
                tables, mu, tree, params,
                require_distinct=True, node_budget=config.node_budget,
            )
            distinct = found.found
    except TreeConfigError:
        pass
    for row in rows:
        row.homomorphism = hom
        row.distinct_witness = distinct
    return rows


def scan_interval(
    config: ScanConfig,
    measure: AtomicMeasure | None = None,
    tree: TreeGraph | None = None,
) -> ScanReport:
    """Run the full grid and detect the viable interval.

    measure/tree may be passed directly (tests, library use); otherwise
    they are loaded from the files named in the config.
    """
    mu = measure if measure is not None else load_measure_for(config)
    if tree is None:
        if config.tree_file is None:
            raise ValidationError("no tree given: set tree_file or pass tree=")
        tree = TreeGraph.load(config.tree_file)
    schedule = compute_peel_schedule(tree)
    depth = config.depth if config.depth is not None else schedule.required_depth

    t_values = config.t_values
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_t = list(
                pool.map(
                    lambda t: _scan_one_t(t, config, mu, tree, schedule, depth),
                    t_values,
                )
            )
    else:
        per_t = [_scan_one_t(t, config, mu, tree, schedule, depth) for t in t_values]

    rows = [row for group in per_t for row in group]

    ok_per_t = [all(r.succeeded for r in group) for group in per_t]
    best_run: tuple[int, int] | None = None
    start = None
    for i, ok in enumerate(ok_per_t + [False]):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if best_run is None or (i - start) > (best_run[1] - best_run[0]):
                best_run = (start, i)
            start = None

    interval = None
    c_k = C_k = None
    if best_run is not None:
        lo, hi = best_run
        interval = (float(t_values[lo]), float(t_values[hi - 1]))
        in_i = [r for group in per_t[lo:hi] for r in group]
        values = [r.integral.value for r in in_i]
        c_k, C_k = min(values), max(values)
        for r in in_i:
            r.integral.bounds_witness = (c_k, C_k)

    return ScanReport(
        config=config,
        rows=rows,
        interval=interval,
        c_k=c_k,
        C_k=C_k,
        measure_label=mu.label,
        tree_label=f"tree[n={tree.n_vertices}]",
        depth=depth,
    )


def _csv_num(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def _csv_bool(b: bool | None) -> str:
    return "" if b is None else ("true" if b else "false")


def emit_report(report: ScanReport, out_dir) -> dict[str, Path]:
    """Write scan.csv, report.json and interval.json into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    _csv_num(r.t),
                    _csv_num(r.eps),
                    _csv_num(r.l1),
                    _csv_num(r.l2sq),
                    _csv_num(r.delta_min),
                    _csv_num(None if r.integral is None else r.integral.value),
                    _csv_bool(r.homomorphism),
                    _csv_bool(r.distinct_witness),
                    r.status,
                ]
            )
        )
    csv_path = out / "scan.csv"
    csv_path.write_text("\n".join(lines) + "\n")

    report_path = out / "report.json"
    with open(report_path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)

    interval_path = out / "interval.json"
    lo, hi = report.interval if report.interval is not None else (None, None)
    with open(interval_path, "w") as fh:
        json.dump({"I_lo": lo, "I_hi": hi, "c_k": report.c_k, "C_k": report.C_k}, fh, indent=2)

    return {"csv": csv_path, "report": report_path, "interval": interval_path}
