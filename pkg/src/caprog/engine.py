"""Deterministic cellular-automaton engines.

One-dimensional CA with arbitrary colour count k and radius r (the k=2, r=1
case is the classic elementary family numbered 0..255), plus a small 2-D
outer-totalistic engine whose default rule is Conway's Game of Life.

All values are immutable after construction; every operation is a pure
function of its inputs, so results can be shared freely between workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

CYCLIC = "cyclic"
FIXED = "fixed"

# Guard against pathological (k, r) combinations: the lookup table has
# k**(2r+1) entries and must stay addressable.
_MAX_TABLE_SIZE = 1 << 20


def _as_cells(values, name: str = "cells") -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.uint8)
    if arr.ndim == 0:
        raise ValueError(f"{name} must be a sequence of cell values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RuleTable:
    """Total local update map of a 1-D CA.

    ``outputs[v]`` is the successor colour for the neighbourhood whose
    base-k value is ``v`` (leftmost cell = most significant digit).
    ``number`` is the canonical integer encoding: digit ``v`` of ``number``
    in base k is ``outputs[v]``.
    """

    k: int
    r: int
    outputs: np.ndarray
    number: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"colour count k must be >= 2, got {self.k}")
        if self.r < 1:
            raise ValueError(f"radius r must be >= 1, got {self.r}")
        size = self.k ** (2 * self.r + 1)
        if size > _MAX_TABLE_SIZE:
            raise ValueError(f"rule table with {size} entries is unsupported")
        out = _as_cells(self.outputs, "outputs")
        if out.shape != (size,):
            raise ValueError(f"outputs must have exactly {size} entries")
        if out.max(initial=0) >= self.k:
            raise ValueError(f"rule outputs must lie in 0..{self.k - 1}")
        object.__setattr__(self, "outputs", out)

    @property
    def neighbourhood_size(self) -> int:
        return 2 * self.r + 1

    @property
    def wolfram_number(self) -> int:
        return self.number

    @property
    def rule_id(self) -> str:
        if self.k == 2 and self.r == 1:
            return f"eca:{self.number}"
        return f"ca:k{self.k}:r{self.r}:{self.number}"

    @property
    def table(self) -> dict[tuple[int, ...], int]:
        """The rule as an explicit neighbourhood-tuple -> colour mapping."""
        width = self.neighbourhood_size
        out = {}
        for value, colour in enumerate(self.outputs):
            digits = []
            v = value
            for _ in range(width):
                digits.append(v % self.k)
                v //= self.k
            out[tuple(reversed(digits))] = int(colour)
        return out


def rule_from_number(number: int, k: int = 2, r: int = 1) -> RuleTable:
    """Decode a canonical rule number into a :class:`RuleTable`.

    Valid numbers lie in ``0 .. k**(k**(2r+1)) - 1``; digit ``v`` of the
    number in base k is the output for the neighbourhood with base-k
    value ``v``.
    """
    if k < 2 or r < 1:
        raise ValueError(f"need k >= 2 and r >= 1, got k={k}, r={r}")
    size = k ** (2 * r + 1)
    if size > _MAX_TABLE_SIZE:
        raise ValueError(f"rule table with {size} entries is unsupported")
    limit = k ** size
    if not 0 <= number < limit:
        raise ValueError(f"rule number {number} outside valid interval [0, {limit})")
    digits = np.empty(size, dtype=np.uint8)
    v = number
    for i in range(size):
        digits[i] = v % k
        v //= k
    return RuleTable(k=k, r=r, outputs=digits, number=number)


def rule_to_number(rule: RuleTable) -> int:
    """Inverse of :func:`rule_from_number` (bit-exact round trip)."""
    total = 0
    for value in range(len(rule.outputs) - 1, -1, -1):
        total = total * rule.k + int(rule.outputs[value])
    return total


def conjugate_rule(rule: RuleTable) -> RuleTable:
    """Colour-complement conjugate of a two-colour rule.

    The conjugate maps a neighbourhood to the complement of what the
    original rule maps the complemented neighbourhood to, so evolving it
    on a complemented input reproduces the complemented evolution.
    """
    if rule.k != 2:
        raise ValueError("conjugation is defined here for k=2 rules only")
    size = len(rule.outputs)
    flipped = 1 - rule.outputs[::-1]  # index size-1-v is the complemented neighbourhood
    number = 0
    for value in range(size - 1, -1, -1):
        number = number * 2 + int(flipped[value])
    return RuleTable(k=2, r=rule.r, outputs=flipped, number=number)


@dataclass(frozen=True, eq=False)
class Configuration:
    """One row of cells plus its boundary convention.

    ``boundary`` is ``"cyclic"`` (the default: indices wrap) or
    ``"fixed"`` (cells beyond the edges read as ``background``).
    """

    cells: np.ndarray
    boundary: str = CYCLIC
    background: int = 0

    def __post_init__(self):
        arr = _as_cells(self.cells)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a configuration is a non-empty 1-D row of cells")
        if self.boundary not in (CYCLIC, FIXED):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.background < 0:
            raise ValueError("background colour must be >= 0")
        object.__setattr__(self, "cells", arr)

    @property
    def width(self) -> int:
        return int(self.cells.size)


@dataclass(frozen=True, eq=False)
class Evolution:
    """Space-time array of a 1-D run: row 0 is the input, row s+1 = step(row s).

    ``t`` counts transitions, so there are t+1 rows.
    """

    rows: np.ndarray
    rule_id: str
    k: int
    boundary: str = CYCLIC
    background: int = 0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.rows, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 1:
            raise ValueError("an evolution needs >= 2 rows of equal positive width")
        if arr.max(initial=0) >= self.k:
            raise ValueError(f"cell values must lie in 0..{self.k - 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "rows", arr)

    @property
    def t(self) -> int:
        return int(self.rows.shape[0]) - 1

    @property
    def width(self) -> int:
        return int(self.rows.shape[1])


def _step_cells(cells: np.ndarray, rule: RuleTable, boundary: str, background: int) -> np.ndarray:
    k, r = rule.k, rule.r
    if boundary == CYCLIC:
        idx = np.zeros(cells.size, dtype=np.int64)
        for s in range(-r, r + 1):
            idx = idx * k + np.roll(cells, -s)
    else:
        padded = np.concatenate(
            [np.full(r, background, dtype=np.uint8), cells, np.full(r, background, dtype=np.uint8)]
        )
        idx = np.zeros(cells.size, dtype=np.int64)
        for d in range(2 * r + 1):
            idx = idx * k + padded[d : d + cells.size]
    return rule.outputs[idx]


def step(config: Configuration, rule: RuleTable) -> Configuration:
    """Apply one synchronous update of ``rule`` to every cell."""
    if config.cells.max(initial=0) >= rule.k:
        raise ValueError(f"configuration uses colours >= k={rule.k}")
    if config.boundary == FIXED and config.background >= rule.k:
        raise ValueError(f"background colour {config.background} >= k={rule.k}")
    out = _step_cells(config.cells, rule, config.boundary, config.background)
    return Configuration(cells=out, boundary=config.boundary, background=config.background)


def evolve(rule: RuleTable, init: Configuration, t: int) -> Evolution:
    """Run ``rule`` for ``t`` transitions from ``init``; returns t+1 rows."""
    if t < 1:
        raise ValueError("an evolution must contain at least one transition (t >= 1)")
    if init.cells.max(initial=0) >= rule.k:
        raise ValueError(f"initial configuration uses colours >= k={rule.k}")
    if init.boundary == FIXED and init.background >= rule.k:
        raise ValueError(f"background colour {init.background} >= k={rule.k}")
    rows = np.empty((t + 1, init.width), dtype=np.uint8)
    rows[0] = init.cells
    current = init.cells
    for s in range(t):
        current = _step_cells(current, rule, init.boundary, init.background)
        rows[s + 1] = current
    return Evolution(
        rows=rows,
        rule_id=rule.rule_id,
        k=rule.k,
        boundary=init.boundary,
        background=init.background,
    )


def replay_check(evo: Evolution, rule: RuleTable) -> bool:
    """True iff every row of ``evo`` is the step image of the row above it."""
    for s in range(evo.t):
        expected = _step_cells(evo.rows[s], rule, evo.boundary, evo.background)
        if not np.array_equal(expected, evo.rows[s + 1]):
            return False
    return True


def default_width(seed_width: int, r: int, t: int) -> int:
    """Width for which the light cone of a centred seed never wraps."""
    return seed_width + 2 * r * t


# ---------------------------------------------------------------------------
# 2-D outer-totalistic engine (Moore neighbourhood, cyclic boundary)

@dataclass(frozen=True)
class LifeRule:
    """Outer-totalistic birth/survival rule over live-neighbour counts 0..8."""

    born: frozenset[int]
    survives: frozenset[int]

    def __post_init__(self):
        for counts in (self.born, self.survives):
            if any(c < 0 or c > 8 for c in counts):
                raise ValueError("neighbour counts must lie in 0..8")

    @property
    def rule_id(self) -> str:
        b = "".join(str(c) for c in sorted(self.born))
        s = "".join(str(c) for c in sorted(self.survives))
        return f"life:B{b}/S{s}"


GAME_OF_LIFE = LifeRule(born=frozenset({3}), survives=frozenset({2, 3}))


@dataclass(frozen=True, eq=False)
class LifeGrid:
    """Binary H x W grid with cyclic boundary."""

    cells: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("a life grid is a non-empty 2-D array")
        if arr.max(initial=0) > 1:
            raise ValueError("life grids are binary")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @property
    def height(self) -> int:
        return int(self.cells.shape[0])

    @property
    def width(self) -> int:
        return int(self.cells.shape[1])


@dataclass(frozen=True, eq=False)
class LifeEvolution:
    """Stacked grids of a 2-D run: ``rows[s]`` is the grid after s steps."""

    rows: np.ndarray
    rule_id: str
    k: int = 2
    boundary: str = CYCLIC

    def __post_init__(self):
        arr = np.ascontiguousarray(self.rows, dtype=np.uint8)
        if arr.ndim != 3 or arr.shape[0] < 2:
            raise ValueError("a life evolution stacks >= 2 grids")
        if arr.max(initial=0) > 1:
            raise ValueError("life grids are binary")
        arr.setflags(write=False)
        object.__setattr__(self, "rows", arr)

    @property
    def t(self) -> int:
        return int(self.rows.shape[0]) - 1


def _life_step_cells(cells: np.ndarray, rule: LifeRule) -> np.ndarray:
    neighbours = np.zeros(cells.shape, dtype=np.uint8)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbours += np.roll(np.roll(cells, di, axis=0), dj, axis=1)
    born_lut = np.zeros(9, dtype=np.uint8)
    born_lut[sorted(rule.born)] = 1
    keep_lut = np.zeros(9, dtype=np.uint8)
    keep_lut[sorted(rule.survives)] = 1
    return np.where(cells == 1, keep_lut[neighbours], born_lut[neighbours]).astype(np.uint8)


def life_step(grid: LifeGrid, rule: LifeRule = GAME_OF_LIFE) -> LifeGrid:
    """One synchronous update; the default rule is B3/S23."""
    return LifeGrid(cells=_life_step_cells(grid.cells, rule))


def life_evolve(rule: LifeRule, init: LifeGrid, t: int) -> LifeEvolution:
    if t < 1:
        raise ValueError("an evolution must contain at least one transition (t >= 1)")
    rows = np.empty((t + 1, init.height, init.width), dtype=np.uint8)
    rows[0] = init.cells
    current = init.cells
    for s in range(t):
        current = _life_step_cells(current, rule)
        rows[s + 1] = current
    return LifeEvolution(rows=rows, rule_id=rule.rule_id)


# ---------------------------------------------------------------------------
# Uniform "system" seam used by the measurement pipeline: a system is either
# a RuleTable acting on Configurations or a LifeRule acting on LifeGrids.

System = RuleTable | LifeRule


def run_system(system: System, member, t: int):
    """Evolve one family member under either engine; returns the evolution."""
    if isinstance(system, RuleTable):
        return evolve(system, member, t)
    if isinstance(system, LifeRule):
        return life_evolve(system, member, t)
    raise TypeError(f"unsupported system type {type(system).__name__}")


def system_id(system: System) -> str:
    if isinstance(system, (RuleTable, LifeRule)):
        return system.rule_id
    raise TypeError(f"unsupported system type {type(system).__name__}")


def iter_eca_numbers() -> Iterator[int]:
    return iter(range(256))
