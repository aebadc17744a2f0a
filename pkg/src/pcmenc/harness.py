"""Experiment driver: scheme x granularity x energy-scale sweeps over one
workload, plus the compressibility-vs-k measurement, emitted as CSV or JSON.

Rows are produced in grid order and every row is independently re-derivable
by a single MemoryArray.run_trace with the same parameters, so reports are
byte-identical across runs of the same spec.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .codecs import make_codec, parse_scheme
from .lines import int_to_words
from .memsim import MemoryArray
from .model import DisturbanceModel, EnergyModel, _as_fraction
from .wlc import words_compressible
from .workloads import GeneratorSpec, generate, open_trace

FORMAT_VERSION = 1

COLUMNS = (
    "scheme",
    "granularity",
    "k",
    "threshold_t",
    "energy_scale",
    "workload",
    "writes",
    "compressed",
    "uncompressed",
    "compression_rate",
    "avg_total_pj",
    "avg_data_pj",
    "avg_aux_pj",
    "avg_flag_pj",
    "avg_updated_cells",
    "avg_disturb_expected",
    "avg_disturb_sampled",
    "old_mismatches",
)


@dataclass
class SweepSpec:
    """Grid description.

    schemes entries are names ("wlcrc", "wlcrc-32") or dicts with keys
    scheme/granularity/k/threshold_t.  The granularities list applies to
    every scheme that takes one and has no pinned value; fixed-granularity
    schemes contribute a single row.  k_sweep adds compressibility-only rows.
    """

    schemes: list = field(default_factory=list)
    granularities: list | None = None
    k_sweep: list = field(default_factory=list)
    energy_scales: list = field(default_factory=lambda: [1])
    workload: GeneratorSpec | str = field(default_factory=GeneratorSpec)
    seed: int = 0
    sample_disturbance: bool = True
    energy: EnergyModel = field(default_factory=EnergyModel)
    disturb: DisturbanceModel = field(default_factory=DisturbanceModel)


@dataclass
class SweepReport:
    meta: dict
    rows: list


def _normalize_schemes(spec: SweepSpec) -> list:
    cells = []
    for entry in spec.schemes:
        if isinstance(entry, str):
            name, g = parse_scheme(entry)
            entry = {"scheme": name, "granularity": g}
        entry = dict(entry)
        if entry.get("granularity") is None and spec.granularities:
            for g in spec.granularities:
                cells.append({**entry, "granularity": g})
        else:
            cells.append(entry)
    return cells


def _records(workload):
    if isinstance(workload, GeneratorSpec):
        return generate(workload)
    return open_trace(workload)


def _workload_name(workload) -> str:
    if isinstance(workload, GeneratorSpec):
        return workload.describe()
    return str(workload)


def run_cell(cell: dict, scale, spec: SweepSpec) -> dict:
    """One sweep row: a full trace run of one scheme configuration."""
    model = replace(spec.energy, scale_high=scale)
    codec = make_codec(
        cell["scheme"],
        model,
        granularity=cell.get("granularity"),
        k=cell.get("k"),
        threshold=cell.get("threshold_t"),
    )
    arr = MemoryArray(
        codec, spec.disturb, seed=spec.seed,
        sample_disturbance=spec.sample_disturbance,
    )
    agg = arr.run_trace(_records(spec.workload))
    row = {c: None for c in COLUMNS}
    row.update(codec.describe())
    row.update(agg.as_dict())
    row["energy_scale"] = str(_as_fraction(scale))
    row["workload"] = _workload_name(spec.workload)
    return row


def _compressibility_row(k: int, spec: SweepSpec) -> dict:
    total = 0
    compressible = 0
    for rec in _records(spec.workload):
        total += 1
        compressible += bool(words_compressible(int_to_words(rec.new), k).all())
    row = {c: None for c in COLUMNS}
    row.update(
        scheme="wlc",
        k=k,
        workload=_workload_name(spec.workload),
        writes=total,
        compression_rate=compressible / total if total else None,
    )
    return row


def run_sweep(spec: SweepSpec) -> SweepReport:
    rows = []
    for cell in _normalize_schemes(spec):
        for scale in spec.energy_scales:
            rows.append(run_cell(cell, scale, spec))
    for k in spec.k_sweep:
        rows.append(_compressibility_row(k, spec))
    meta = {
        "format_version": FORMAT_VERSION,
        "seed": spec.seed,
        "workload": _workload_name(spec.workload),
        "energy": spec.energy.describe(),
        "disturb": spec.disturb.describe(),
        "sample_disturbance": spec.sample_disturbance,
    }
    return SweepReport(meta=meta, rows=rows)


def _cell_text(value) -> str:
    return "" if value is None else str(value)


def emit_csv(report: SweepReport, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(COLUMNS)
        for row in report.rows:
            writer.writerow([_cell_text(row.get(c)) for c in COLUMNS])


def emit_json(report: SweepReport, path) -> None:
    with open(path, "w") as f:
        json.dump({"meta": report.meta, "rows": report.rows}, f, indent=2)
        f.write("\n")


def emit_report(report: SweepReport, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        emit_csv(report, path)
    elif fmt == "json":
        emit_json(report, path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def load_json_report(path) -> SweepReport:
    with open(path) as f:
        payload = json.load(f)
    return SweepReport(meta=payload["meta"], rows=payload["rows"])
