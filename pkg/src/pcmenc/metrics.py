"""Per-write energy breakdown, updated-cell counts, and disturbance errors.

All functions take the full physical cell vectors of a line (data ++ aux ++
flag, in that order); disturbance adjacency is the 1-D chain over that
vector, immediate neighbors only, no wraparound.  Every changed cell counts
as one RESET heat event regardless of target state, so any written cell can
disturb its idle neighbors.  Disturbed cells are counted, not mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codecs.base import REGION_AUX, REGION_DATA, REGION_FLAG
from .model import DisturbanceModel, EnergyModel


@dataclass(frozen=True)
class CostBreakdown:
    """Write energy split by cell region, in exact integer units of 1/denom pJ."""

    data_units: int
    aux_units: int
    flag_units: int
    updated_cells: int
    denom: int = 1

    @property
    def total_units(self) -> int:
        return self.data_units + self.aux_units + self.flag_units

    @property
    def data_pj(self) -> float:
        return self.data_units / self.denom

    @property
    def aux_pj(self) -> float:
        return self.aux_units / self.denom

    @property
    def flag_pj(self) -> float:
        return self.flag_units / self.denom

    @property
    def total_pj(self) -> float:
        return self.total_units / self.denom


@dataclass(frozen=True)
class WriteReport:
    breakdown: CostBreakdown
    disturb_expected: float
    disturb_sampled: int
    cells_total: int


def energy_report(old_cells, new_cells, labels, model: EnergyModel) -> CostBreakdown:
    """Sum differential write energy per region and count updated cells."""
    old_cells = np.asarray(old_cells)
    new_cells = np.asarray(new_cells)
    labels = np.asarray(labels)
    if not (old_cells.shape == new_cells.shape == labels.shape):
        raise ValueError("old, new, and labels must have identical shapes")
    cost = model.cost_flat[old_cells.astype(np.int64) * 4 + new_cells]
    region_units = [int(cost[labels == r].sum()) for r in (REGION_DATA, REGION_AUX, REGION_FLAG)]
    return CostBreakdown(
        data_units=region_units[0],
        aux_units=region_units[1],
        flag_units=region_units[2],
        updated_cells=int((old_cells != new_cells).sum()),
        denom=model.denom,
    )


def _neighbor_writes(written: np.ndarray):
    left = np.zeros_like(written)
    right = np.zeros_like(written)
    left[1:] = written[:-1]
    right[:-1] = written[1:]
    return left, right


def disturbance_expected(old_cells, new_cells, dmodel: DisturbanceModel) -> float:
    """Expected count of idle cells flipped, one trial per written neighbor."""
    old_cells = np.asarray(old_cells)
    new_cells = np.asarray(new_cells)
    written = old_cells != new_cells
    left, right = _neighbor_writes(written)
    n_trials = left.astype(np.int64) + right
    survive = (1.0 - dmodel.rates[old_cells]) ** n_trials
    return float(((1.0 - survive) * ~written).sum())


def disturbance_samples(old_cells, new_cells, dmodel: DisturbanceModel,
                        seed, n: int = 1) -> np.ndarray:
    """n independent Monte-Carlo draws of the disturbed-cell count.

    Each written neighbor of an idle cell gets its own Bernoulli trial at
    the idle cell's rate; a cell counts once no matter how many trials hit.
    Deterministic for a fixed seed.
    """
    old_cells = np.asarray(old_cells)
    new_cells = np.asarray(new_cells)
    written = old_cells != new_cells
    left, right = _neighbor_writes(written)
    idle = ~written
    at_risk = np.flatnonzero(idle & (left | right) & (dmodel.rates[old_cells] > 0))
    counts = np.zeros(n, dtype=np.int64)
    if len(at_risk) == 0:
        return counts
    rates = dmodel.rates[old_cells[at_risk]]
    l_mask = left[at_risk]
    r_mask = right[at_risk]
    rng = np.random.default_rng(seed)
    # Chunk the sample axis so huge n stays within memory.
    chunk = max(1, min(n, 2_000_000 // max(1, len(at_risk))))
    done = 0
    while done < n:
        m = min(chunk, n - done)
        hit_l = (rng.random((m, len(at_risk))) < rates) & l_mask
        hit_r = (rng.random((m, len(at_risk))) < rates) & r_mask
        counts[done : done + m] = (hit_l | hit_r).sum(axis=1)
        done += m
    return counts


def disturbance_sampled(old_cells, new_cells, dmodel: DisturbanceModel, seed) -> int:
    """One Monte-Carlo draw of the disturbed-cell count for this write."""
    return int(disturbance_samples(old_cells, new_cells, dmodel, seed, n=1)[0])
