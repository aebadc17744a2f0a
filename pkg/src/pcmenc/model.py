"""Cell states, write-energy and disturbance models, and coset candidate tables.

A 4-level cell stores one 2-bit symbol.  Symbols are plain ints in
``range(4)`` whose value is the bit pattern (``0b00`` .. ``0b11``); states
are :class:`CellState` members S1..S4, numbered by the energy needed to
program them (S1 cheapest, S4 most expensive).

A *coset candidate* is a bijection from the four symbols onto the four
states.  A :class:`CandidateTable` bundles an ordered set of candidates
with the auxiliary-cell state assignment used to record which candidate
encoded a block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

N_SYMBOLS = 4


class CellState(IntEnum):
    """Resistance states ordered by programming energy (S1 < S2 < S3 < S4)."""

    S1 = 0
    S2 = 1
    S3 = 2
    S4 = 3


S1, S2, S3, S4 = CellState.S1, CellState.S2, CellState.S3, CellState.S4

DEFAULT_RESET_PJ = 36
DEFAULT_SET_PJ = (0, 20, 307, 547)
DEFAULT_DISTURB_RATE = (0.123, 0.0, 0.276, 0.152)

# Fractional scale factors (1/2, 1/3, ...) arrive as floats from CLI flags;
# snapping to a small denominator keeps the integer cost arithmetic exact.
_MAX_SCALE_DENOM = 1000


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(_MAX_SCALE_DENOM)
    raise TypeError(f"cannot interpret {value!r} as an exact scale factor")


@dataclass(frozen=True)
class EnergyModel:
    """Per-state write energies under differential write.

    Writing a changed cell costs one RESET pulse plus the SET energy of the
    target state; an unchanged cell costs nothing.  ``scale_high`` scales the
    SET component of the two high-energy states (S3, S4) only -- the RESET
    pulse is a single fixed-cost event.

    All costs are held as exact integers in units of ``1/denom`` pJ so that
    candidate-cost comparisons never depend on float rounding.
    """

    reset_pj: int = DEFAULT_RESET_PJ
    set_pj: tuple = DEFAULT_SET_PJ
    scale_high: object = 1

    def __post_init__(self):
        reset = _as_fraction(self.reset_pj)
        scale = _as_fraction(self.scale_high)
        if reset < 0 or scale < 0:
            raise ValueError("energies and scale factors must be nonnegative")
        if len(self.set_pj) != N_SYMBOLS:
            raise ValueError("set_pj needs one entry per state S1..S4")
        sets = [_as_fraction(s) for s in self.set_pj]
        sets[2] *= scale
        sets[3] *= scale
        if any(s < 0 for s in sets):
            raise ValueError("set energies must be nonnegative")
        if any(sets[i] > sets[i + 1] for i in range(3)):
            raise ValueError("set energies must be nondecreasing S1..S4 after scaling")
        denom = math.lcm(reset.denominator, *(s.denominator for s in sets))
        write_units = np.array(
            [int((reset + s) * denom) for s in sets], dtype=np.int64
        )
        cost = np.tile(write_units, (N_SYMBOLS, 1))
        np.fill_diagonal(cost, 0)
        flat = np.ascontiguousarray(cost.reshape(-1))
        write_units.setflags(write=False)
        flat.setflags(write=False)
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "write_units", write_units)
        object.__setattr__(self, "cost_flat", flat)

    def cell_cost_units(self, old: int, new: int) -> int:
        """Integer differential-write cost, in 1/denom pJ."""
        return int(self.cost_flat[int(old) * N_SYMBOLS + int(new)])

    def units_to_pj(self, units) -> float:
        return float(units) / self.denom

    def exact_pj(self, units: int):
        """Units as an exact pJ number (int when whole, Fraction otherwise)."""
        frac = Fraction(int(units), self.denom)
        return frac.numerator if frac.denominator == 1 else frac

    def describe(self) -> dict:
        return {
            "reset_pj": self.reset_pj,
            "set_pj": list(self.set_pj),
            "scale_high": str(_as_fraction(self.scale_high)),
        }


@dataclass(frozen=True)
class DisturbanceModel:
    """Probability that an idle cell in each state flips when a neighbor is RESET.

    The minimum-resistance state S2 is immune: RESET heat only lowers
    resistance, so rate(S2) must be zero.
    """

    rate: tuple = DEFAULT_DISTURB_RATE

    def __post_init__(self):
        if len(self.rate) != N_SYMBOLS:
            raise ValueError("rate needs one entry per state S1..S4")
        if any(not 0.0 <= r <= 1.0 for r in self.rate):
            raise ValueError("disturbance rates must be probabilities")
        if self.rate[CellState.S2] != 0.0:
            raise ValueError("rate(S2) must be 0: the lowest-resistance state is immune")
        rates = np.array(self.rate, dtype=np.float64)
        rates.setflags(write=False)
        object.__setattr__(self, "rates", rates)

    def describe(self) -> dict:
        return {"disturb_rate": list(self.rate)}


@dataclass(frozen=True)
class CosetCandidate:
    """One bijective symbol-to-state mapping.

    ``states[sym]`` is the state that symbol ``sym`` is written as;
    ``symbols[state]`` is the inverse direction used when decoding.
    """

    cid: int
    states: tuple

    def __post_init__(self):
        if sorted(self.states) != list(range(N_SYMBOLS)):
            raise ValueError(f"candidate C{self.cid} is not a permutation: {self.states}")
        symbols = [0] * N_SYMBOLS
        for sym, state in enumerate(self.states):
            symbols[state] = sym
        object.__setattr__(self, "symbols", tuple(symbols))


def _from_column(cid: int, column: Sequence[int]) -> CosetCandidate:
    """Build a candidate from the symbol listed for each state S1..S4."""
    states = [0] * N_SYMBOLS
    for state, sym in enumerate(column):
        states[sym] = state
    return CosetCandidate(cid, tuple(states))


@dataclass(frozen=True)
class CandidateTable:
    """An ordered candidate set plus the aux-cell states naming each choice.

    Each aux assignment is one or two cell states written verbatim into the
    block's auxiliary cells; assignments must be pairwise distinct so the
    decoder can recover the candidate.
    """

    name: str
    candidates: tuple
    aux_states: tuple

    def __post_init__(self):
        if len(self.aux_states) != len(self.candidates):
            raise ValueError("need exactly one aux assignment per candidate")
        if len(set(self.aux_states)) != len(self.aux_states):
            raise ValueError("aux assignments must be pairwise distinct")
        widths = {len(a) for a in self.aux_states}
        if len(widths) != 1:
            raise ValueError("aux assignments must all have the same cell count")
        luts = np.array([c.states for c in self.candidates], dtype=np.uint8)
        inv = np.array([c.symbols for c in self.candidates], dtype=np.uint8)
        aux = np.array([[int(s) for s in a] for a in self.aux_states], dtype=np.uint8)
        for arr in (luts, inv, aux):
            arr.setflags(write=False)
        object.__setattr__(self, "luts", luts)
        object.__setattr__(self, "inv_luts", inv)
        object.__setattr__(self, "aux_luts", aux)

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def aux_width(self) -> int:
        return len(self.aux_states[0])

    @property
    def sel_bits(self) -> int:
        """Bits needed to name one candidate in a packed selection field."""
        return max(1, (len(self.candidates) - 1).bit_length())


# The four-candidate table.  Columns list the symbol stored as S1..S4:
#   C1 is the chip default; C2/C4 send the frequent all-zero / all-one
#   symbols to the cheap states; C3 complements C1 on the cheap states.
C1 = _from_column(1, (0b00, 0b10, 0b11, 0b01))
C2 = _from_column(2, (0b11, 0b00, 0b10, 0b01))
C3 = _from_column(3, (0b11, 0b01, 0b00, 0b10))
C4 = _from_column(4, (0b11, 0b00, 0b01, 0b10))

TABLE_4COSETS = CandidateTable(
    "4cosets", (C1, C2, C3, C4), ((S1,), (S2,), (S3,), (S4,))
)
TABLE_3COSETS = CandidateTable("3cosets", (C1, C2, C3), ((S1,), (S2,), (S3,)))

# Symbols ranked by their default (C1) state; used to order the leftover
# pair of a two-symbols-to-cheap-states candidate.
_DEFAULT_ORDER = (0b00, 0b10, 0b11, 0b01)
_DEFAULT_RANK = {sym: i for i, sym in enumerate(_DEFAULT_ORDER)}


def _pair_candidates() -> tuple:
    """All six ways to put one symbol pair on {S1,S2}.

    The numerically smaller symbol of the pair takes S1; the remaining two
    symbols take S3/S4 in their default-state order.
    """
    cands = []
    for a in range(N_SYMBOLS):
        for b in range(a + 1, N_SYMBOLS):
            states = [None] * N_SYMBOLS
            states[a] = int(S1)
            states[b] = int(S2)
            rest = sorted(set(range(N_SYMBOLS)) - {a, b}, key=_DEFAULT_RANK.get)
            states[rest[0]] = int(S3)
            states[rest[1]] = int(S4)
            cands.append(CosetCandidate(len(cands) + 1, tuple(states)))
    return tuple(cands)


# The six cheapest two-cell state combinations (by summed SET energy,
# lexicographic on ties) name the six pair candidates.
SIX_COSET_AUX = ((S1, S1), (S1, S2), (S2, S1), (S2, S2), (S1, S3), (S3, S1))
TABLE_6COSETS = CandidateTable("6cosets", _pair_candidates(), SIX_COSET_AUX)


def default_map(symbol: int) -> CellState:
    """The chip-default (C1) image of a symbol."""
    return CellState(C1.states[symbol])


def apply_coset(candidate: CosetCandidate, symbols: Iterable[int]) -> list:
    """Map a symbol sequence to cell states under one candidate."""
    return [CellState(candidate.states[s]) for s in symbols]


def invert_coset(candidate: CosetCandidate, states: Iterable[int]) -> list:
    """Recover the symbol sequence from cell states written under a candidate."""
    return [candidate.symbols[int(s)] for s in states]


def cell_write_energy(old: int, new: int, model: EnergyModel):
    """Exact differential-write energy in pJ (0 when the cell is unchanged)."""
    return model.exact_pj(model.cell_cost_units(old, new))


_STATE_KEYS = ("S1", "S2", "S3", "S4")


def models_from_dict(cfg: dict) -> tuple:
    """Build (EnergyModel, DisturbanceModel) from a key-value mapping.

    Recognized keys: ``reset_pj`` (number), ``set_pj`` and ``disturb_rate``
    (either a 4-list ordered S1..S4 or a {"S1": ...} mapping), and
    ``scale_high`` (number or "p/q" string).  Missing keys keep defaults.
    """

    def by_state(value, default):
        if value is None:
            return default
        if isinstance(value, dict):
            return tuple(value[k] for k in _STATE_KEYS)
        return tuple(value)

    energy = EnergyModel(
        reset_pj=cfg.get("reset_pj", DEFAULT_RESET_PJ),
        set_pj=by_state(cfg.get("set_pj"), DEFAULT_SET_PJ),
        scale_high=cfg.get("scale_high", 1),
    )
    disturb = DisturbanceModel(
        rate=by_state(cfg.get("disturb_rate"), DEFAULT_DISTURB_RATE)
    )
    return energy, disturb


def load_models(path) -> tuple:
    """Load (EnergyModel, DisturbanceModel) from a JSON config file."""
    cfg = json.loads(Path(path).read_text())
    return models_from_dict(cfg)
