"""Exhaustive single-block selection oracle, kept independent of the
vectorized encoders so optimality tests have a second route to the answer."""

from __future__ import annotations

from ..model import CandidateTable, EnergyModel, cell_write_energy

MAX_BLOCK_SYMBOLS = 32


def brute_force_best(block_syms, old_cells, candidates, model: EnergyModel):
    """Evaluate every candidate on one block; return (candidate id, exact pJ).

    Ties resolve to the smallest candidate id.  `candidates` may be a
    CandidateTable or any sequence of CosetCandidate.
    """
    if isinstance(candidates, CandidateTable):
        candidates = candidates.candidates
    block_syms = list(block_syms)
    old_cells = list(old_cells)
    if len(block_syms) > MAX_BLOCK_SYMBOLS:
        raise ValueError(f"oracle blocks are at most {MAX_BLOCK_SYMBOLS} symbols")
    if len(block_syms) != len(old_cells):
        raise ValueError("block and stored cells must have equal length")

    best_id, best_cost = None, None
    for cand in candidates:
        cost = sum(
            cell_write_energy(old, cand.states[sym], model)
            for sym, old in zip(block_syms, old_cells)
        )
        if best_cost is None or cost < best_cost:
            best_id, best_cost = cand.cid, cost
    return best_id, best_cost
