"""
Young diagrams, dominant characters and j-sequences
Block enumeration B_c(d), Schur-module weights read off semistandard tableaux,
and the padded lexicographic order that labels semiorthogonal summands
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from errors import DimensionMismatchError, PreconditionError, UnsupportedWeightError

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]
Tableau = Tuple[Tuple[int, ...], ...]


def conjugate(parts: Sequence[int]) -> Tuple[int, ...]:
    """Transpose a partition: column heights from row lengths (or back)."""
    width = parts[0] if parts else 0
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, width + 1))


@dataclass(frozen=True)
class YoungDiagram:
    """Row lengths, weakly decreasing and positive. () is the empty diagram."""
    rows: Tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        for i, r in enumerate(rows):
            if r < 1:
                raise PreconditionError(f"row {i + 1} has length {r}; rows must be positive")
            if i and r > rows[i - 1]:
                raise PreconditionError(
                    f"rows must be weakly decreasing: row {i + 1} = {r} > row {i} = {rows[i - 1]}"
                )
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def from_columns(cls, cols: Sequence[int]) -> 'YoungDiagram':
        heights = cls(tuple(c for c in cols if c != 0))
        return cls(conjugate(heights.rows))

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows[0] if self.rows else 0

    def size(self) -> int:
        return sum(self.rows)

    def columns(self) -> Tuple[int, ...]:
        return conjugate(self.rows)

    def to_json(self) -> List[int]:
        return list(self.rows)


@dataclass(frozen=True)
class Character:
    """Dominant GL(d) weight stored increasing: x_1 <= ... <= x_d."""
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        for i in range(1, len(entries)):
            if entries[i] < entries[i - 1]:
                raise PreconditionError(
                    f"character entries must be weakly increasing: x_{i + 1} = {entries[i]} "
                    f"< x_{i} = {entries[i - 1]}"
                )
        object.__setattr__(self, 'entries', entries)

    @property
    def d(self) -> int:
        return len(self.entries)

    def in_block(self, c: int) -> bool:
        if c < self.d:
            return False
        return all(0 <= x <= c - self.d for x in self.entries)

    def to_json(self) -> List[int]:
        return list(self.entries)


@dataclass(frozen=True)
class JSequence:
    """Weakly increasing 0 <= j_1 <= ... <= j_l, padded with -1 up to length d."""
    values: Tuple[int, ...]
    d: int

    def __post_init__(self):
        values = tuple(int(j) for j in self.values)
        if len(values) > self.d:
            raise PreconditionError(f"j-sequence of length {len(values)} exceeds ambient length {self.d}")
        if values and values[0] < 0:
            raise PreconditionError(f"j-sequence entries must be non-negative, got {values[0]}")
        for i in range(1, len(values)):
            if values[i] < values[i - 1]:
                raise PreconditionError(f"j-sequence must be weakly increasing: {values}")
        object.__setattr__(self, 'values', values)

    @property
    def l(self) -> int:
        return len(self.values)

    def padded(self) -> Tuple[int, ...]:
        return self.values + (-1,) * (self.d - self.l)

    def to_json(self) -> Dict:
        return {"values": list(self.values), "d": self.d}


class Order(Enum):
    """Outcome of comparing two j-sequences."""
    GREATER = "≻"
    EQUAL = "="
    LESS = "≺"


def diagram_to_char(delta: YoungDiagram, d: int) -> Character:
    """Row i of the diagram holds x_{d-i+1} boxes."""
    if delta.height > d:
        raise DimensionMismatchError(f"diagram has {delta.height} rows but rank is {d}")
    rows = delta.rows + (0,) * (d - delta.height)
    return Character(tuple(reversed(rows)))


def char_to_diagram(chi: Character) -> YoungDiagram:
    if chi.entries and chi.entries[0] < 0:
        raise UnsupportedWeightError(f"x_1 = {chi.entries[0]} is negative")
    return YoungDiagram(tuple(x for x in reversed(chi.entries) if x > 0))


def columns(delta: YoungDiagram) -> Tuple[int, ...]:
    return delta.columns()


def enumerate_block(c: int, d: int) -> List[Character]:
    """All characters of B_c(d), lexicographic."""
    if c < 0 or d < 0:
        raise PreconditionError(f"block B_{c}({d}) needs c, d >= 0")
    if c < d:
        return []
    block = [Character(t) for t in combinations_with_replacement(range(c - d + 1), d)]
    logger.debug("B_%d(%d) has %d characters", c, d, len(block))
    return block


def semistandard_tableaux(shape: Sequence[int], d: int) -> Iterator[Tableau]:
    """
    Backtracking over cells in row-major order. Rows weakly increase,
    columns strictly increase, entries lie in 1..d.
    """
    shape = tuple(shape)
    heights = conjugate(shape)
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    grid = [[0] * length for length in shape]

    def backtrack(pos: int) -> Iterator[Tableau]:
        if pos == len(cells):
            yield tuple(tuple(row) for row in grid)
            return
        r, c = cells[pos]
        low = grid[r][c - 1] if c > 0 else 1
        if r > 0:
            low = max(low, grid[r - 1][c] + 1)
        # leave room for the strictly larger entries below in this column
        high = d - (heights[c] - 1 - r)
        for val in range(low, high + 1):
            grid[r][c] = val
            yield from backtrack(pos + 1)
        grid[r][c] = 0

    yield from backtrack(0)


def tableau_weight(tableau: Tableau, d: int) -> Weight:
    counts = [0] * d
    for row in tableau:
        for val in row:
            counts[val - 1] += 1
    return tuple(reversed(counts))


def weighted_tableaux(chi: Character) -> Iterator[Tuple[Tableau, Weight]]:
    """(tableau, weight) pairs of V(chi); the highest-weight tableau has weight chi."""
    delta = char_to_diagram(chi)
    for tableau in semistandard_tableaux(delta.rows, chi.d):
        yield tableau, tableau_weight(tableau, chi.d)


def schur_weights(chi: Character) -> Counter:
    weights = Counter(w for _, w in weighted_tableaux(chi))
    logger.debug("V%s: %d weights, dim %d", chi.entries, len(weights), sum(weights.values()))
    return weights


def weight_matrix(chi: Character) -> np.ndarray:
    """Weights of V(chi) with multiplicity, one per row."""
    rows = [w for _, w in weighted_tableaux(chi)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), chi.d)


def hook_content_dim(chi: Character) -> int:
    """dim V(chi) from the hook-content formula."""
    delta = char_to_diagram(chi)
    heights = delta.columns()
    num, den = 1, 1
    for r, length in enumerate(delta.rows):
        for c in range(length):
            num *= chi.d + c - r
            den *= (length - c - 1) + (heights[c] - r - 1) + 1
    return num // den


def tensor_det(chi: Character, j: int) -> Character:
    return Character(tuple(x + j for x in chi.entries))


def jseq_compare(first: JSequence, second: JSequence) -> Order:
    if first.d != second.d:
        raise DimensionMismatchError(f"ambient lengths differ: {first.d} vs {second.d}")
    left, right = first.padded(), second.padded()
    if left > right:
        return Order.GREATER
    if left < right:
        return Order.LESS
    return Order.EQUAL


def enumerate_jseqs(l: int, bound: int, d: int) -> List[JSequence]:
    """0 <= j_1 <= ... <= j_l <= bound, largest first."""
    if not 0 <= l <= d:
        raise PreconditionError(f"need 0 <= l <= d, got l={l}, d={d}")
    if l == 0:
        return [JSequence((), d)]
    if bound < 0:
        return []
    seqs = [JSequence(t, d) for t in combinations_with_replacement(range(bound + 1), l)]
    seqs.sort(key=JSequence.padded, reverse=True)
    return seqs


if __name__ == "__main__":
    print("\n[DIAGRAMS - Block and Schur weight demo]")
    print("=" * 70)
    chi = diagram_to_char(YoungDiagram((4, 2, 1)), 4)
    print(f"✓ (4,2,1) in rank 4 -> character {chi.entries}")
    print(f"✓ |B_7(3)| = {len(enumerate_block(7, 3))}")
    print(f"✓ dim V{chi.entries} = {sum(schur_weights(chi).values())} (hook-content {hook_content_dim(chi)})")
    print(f"✓ j-sequences l=2, bound=1: {[s.values for s in enumerate_jseqs(2, 1, 2)]}")
