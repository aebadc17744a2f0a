"""Stateful memory array: applies a write trace through one codec.

The array tracks the encoded cell states per line address so differential
writes and all reports reflect true history.  Addresses never written start
in the all-S1 state (flag S1), which decodes to the all-zero line.  When a
trace record carries the overwritten value and the address is untracked,
the array seeds itself by encoding that value first (the seeding write is
not counted).  A supplied old value that contradicts tracked state is
ignored apart from a warning counter: tracked state is ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codecs import EncodedLine, FLAG_COMPRESSED, LineCodec, StateBatch
from .lines import int_to_symbols
from .metrics import (
    CostBreakdown,
    WriteReport,
    disturbance_expected,
    disturbance_samples,
    energy_report,
)
from .model import DisturbanceModel, EnergyModel


@dataclass(frozen=True)
class WriteRecord:
    """One trace event: line address, value written, optional value overwritten."""

    address: int
    new: int
    old: int | None = None


@dataclass
class AggregateReport:
    """Running totals over a trace plus per-write averages."""

    writes: int = 0
    data_units: int = 0
    aux_units: int = 0
    flag_units: int = 0
    updated_cells: int = 0
    disturb_expected: float = 0.0
    disturb_sampled: int = 0
    compressed: int = 0
    uncompressed: int = 0
    old_mismatches: int = 0
    denom: int = 1

    def add(self, report: WriteReport, compressed: bool | None):
        b = report.breakdown
        self.writes += 1
        self.data_units += b.data_units
        self.aux_units += b.aux_units
        self.flag_units += b.flag_units
        self.updated_cells += b.updated_cells
        self.disturb_expected += report.disturb_expected
        self.disturb_sampled += report.disturb_sampled
        if compressed is not None:
            if compressed:
                self.compressed += 1
            else:
                self.uncompressed += 1

    def _avg(self, total) -> float:
        return total / self.writes if self.writes else 0.0

    @property
    def avg_data_pj(self) -> float:
        return self._avg(self.data_units / self.denom)

    @property
    def avg_aux_pj(self) -> float:
        return self._avg(self.aux_units / self.denom)

    @property
    def avg_flag_pj(self) -> float:
        return self._avg(self.flag_units / self.denom)

    @property
    def avg_total_pj(self) -> float:
        return self._avg((self.data_units + self.aux_units + self.flag_units) / self.denom)

    @property
    def avg_updated_cells(self) -> float:
        return self._avg(self.updated_cells)

    @property
    def avg_disturb_expected(self) -> float:
        return self._avg(self.disturb_expected)

    @property
    def avg_disturb_sampled(self) -> float:
        return self._avg(self.disturb_sampled)

    @property
    def compression_rate(self):
        tracked = self.compressed + self.uncompressed
        return self.compressed / tracked if tracked else None

    def as_dict(self) -> dict:
        return {
            "writes": self.writes,
            "avg_total_pj": self.avg_total_pj,
            "avg_data_pj": self.avg_data_pj,
            "avg_aux_pj": self.avg_aux_pj,
            "avg_flag_pj": self.avg_flag_pj,
            "avg_updated_cells": self.avg_updated_cells,
            "avg_disturb_expected": self.avg_disturb_expected,
            "avg_disturb_sampled": self.avg_disturb_sampled,
            "compressed": self.compressed,
            "uncompressed": self.uncompressed,
            "compression_rate": self.compression_rate,
            "old_mismatches": self.old_mismatches,
        }


class MemoryArray:
    """Per-address store of encoded lines, fed one WriteRecord at a time."""

    def __init__(self, codec: LineCodec, dmodel: DisturbanceModel | None = None,
                 seed: int = 0, sample_disturbance: bool = True):
        self.codec = codec
        self.model: EnergyModel = codec.model
        self.dmodel = dmodel if dmodel is not None else DisturbanceModel()
        self.seed = seed
        self.sample_disturbance = sample_disturbance
        self.lines: dict[int, EncodedLine] = {}
        self.totals = AggregateReport(denom=self.model.denom)

    def stored(self, address: int) -> EncodedLine:
        line = self.lines.get(address)
        return line if line is not None else self.codec.initial_line()

    def stored_value(self, address: int) -> int:
        return self.codec.decode(self.stored(address))

    def apply_write(self, rec: WriteRecord) -> WriteReport:
        old_enc = self.lines.get(rec.address)
        if rec.old is not None:
            if old_enc is None:
                old_enc = self.codec.encode(rec.old, None)
            elif self.codec.decode(old_enc) != rec.old:
                self.totals.old_mismatches += 1
        if old_enc is None:
            old_enc = self.codec.initial_line()

        new_enc = self.codec.encode(rec.new, old_enc)
        state = StateBatch.from_lines([new_enc], self.codec.has_flag)
        labels = self.codec.region_labels(state)[0]
        old_cells = old_enc.cells()
        new_cells = new_enc.cells()
        breakdown = energy_report(old_cells, new_cells, labels, self.model)
        expected = disturbance_expected(old_cells, new_cells, self.dmodel)
        sampled = 0
        if self.sample_disturbance:
            seed = np.random.SeedSequence(
                [self.seed, rec.address, self.totals.writes]
            )
            sampled = int(disturbance_samples(old_cells, new_cells, self.dmodel, seed)[0])

        self.lines[rec.address] = new_enc
        compressed = None
        if self.codec.has_flag:
            compressed = new_enc.flag == FLAG_COMPRESSED
        report = WriteReport(breakdown, expected, sampled, len(new_cells))
        self.totals.add(report, compressed)
        return report

    def run_trace(self, records) -> AggregateReport:
        """Fold apply_write over a record stream and return the totals."""
        for rec in records:
            self.apply_write(rec)
        return self.totals
