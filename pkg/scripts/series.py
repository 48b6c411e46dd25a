"""
Truncated generating series for DT/PT counts on the conifold
Exact bivariate integer series, wall factors, the wall-crossing product,
the PT product formula, a_{n,beta} and the three-way crosscheck against
summand counts of the window decompositions
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from diagrams import JSequence, Order, jseq_compare
from errors import DimensionMismatchError, PreconditionError
from quiver import WallFamily
from verification import agreement
from windows import conifold_sod

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]

DT_VARIABLES = ("q0", "q1")
PT_VARIABLES = ("q", "t")


class Series2:
    """
    Truncated bivariate power series with exact integer coefficients.

    Coefficients live in a dense (N0+1) x (N1+1) object grid of Python ints;
    anything with e0 > N0 or e1 > N1 is dropped after every operation.
    Instances are immutable.
    """
    __slots__ = ("_grid", "trunc", "variables")

    def __init__(
        self,
        coefficients: Optional[Dict[Exponent, int]] = None,
        trunc: Exponent = (0, 0),
        variables: Tuple[str, str] = DT_VARIABLES,
    ):
        n0, n1 = trunc
        if n0 < 0 or n1 < 0:
            raise PreconditionError(f"truncation {trunc} has a negative bound")
        grid = np.zeros((n0 + 1, n1 + 1), dtype=object)
        for (e0, e1), c in (coefficients or {}).items():
            if e0 < 0 or e1 < 0:
                raise PreconditionError(f"exponent ({e0}, {e1}) is negative")
            if e0 <= n0 and e1 <= n1:
                grid[e0, e1] += int(c)
        self._freeze(grid, (n0, n1), tuple(variables))

    def _freeze(self, grid: np.ndarray, trunc: Exponent, variables: Tuple[str, str]):
        grid.flags.writeable = False
        object.__setattr__(self, "_grid", grid)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "variables", variables)

    def __setattr__(self, name, value):
        raise AttributeError("Series2 is immutable")

    @classmethod
    def _from_grid(cls, grid: np.ndarray, trunc: Exponent, variables: Tuple[str, str]) -> "Series2":
        series = cls.__new__(cls)
        series._freeze(grid, trunc, variables)
        return series

    @classmethod
    def one(cls, trunc: Exponent, variables: Tuple[str, str] = DT_VARIABLES) -> "Series2":
        return cls({(0, 0): 1}, trunc, variables)

    @classmethod
    def monomial(cls, e: Exponent, c: int, trunc: Exponent, variables: Tuple[str, str] = DT_VARIABLES) -> "Series2":
        return cls({tuple(e): c}, trunc, variables)

    def coefficient(self, e0: int, e1: int) -> int:
        if not (0 <= e0 <= self.trunc[0] and 0 <= e1 <= self.trunc[1]):
            raise PreconditionError(f"exponent ({e0}, {e1}) outside truncation {self.trunc}")
        return int(self._grid[e0, e1])

    def terms(self) -> Iterator[Tuple[Exponent, int]]:
        """Nonzero terms in exponent order."""
        for e0, e1 in sorted(zip(*np.nonzero(self._grid))):
            yield (int(e0), int(e1)), int(self._grid[e0, e1])

    def _check_compatible(self, other: "Series2"):
        if self.trunc != other.trunc or self.variables != other.variables:
            raise PreconditionError(
                f"cannot combine series over {self.variables}{self.trunc} and {other.variables}{other.trunc}"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series2):
            return NotImplemented
        return (self.trunc == other.trunc and self.variables == other.variables
                and bool(np.array_equal(self._grid, other._grid)))

    __hash__ = None

    def __add__(self, other: "Series2") -> "Series2":
        self._check_compatible(other)
        return Series2._from_grid(self._grid + other._grid, self.trunc, self.variables)

    def __neg__(self) -> "Series2":
        return Series2._from_grid(-self._grid, self.trunc, self.variables)

    def __sub__(self, other: "Series2") -> "Series2":
        return self + (-other)

    def __mul__(self, other) -> "Series2":
        if isinstance(other, int):
            return Series2._from_grid(self._grid * other, self.trunc, self.variables)
        self._check_compatible(other)
        n0, n1 = self.trunc
        out = np.zeros_like(self._grid)
        for i, j in zip(*np.nonzero(self._grid)):
            out[i:, j:] += self._grid[i, j] * other._grid[: n0 + 1 - i, : n1 + 1 - j]
        return Series2._from_grid(out, self.trunc, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Series2":
        if k < 0:
            raise PreconditionError("only non-negative powers of a truncated series are defined")
        result = Series2.one(self.trunc, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def to_json(self) -> Dict:
        return {
            "vars": list(self.variables),
            "trunc": list(self.trunc),
            "terms": [{"e": [e0, e1], "c": str(c)} for (e0, e1), c in self.terms()],
        }

    def __repr__(self) -> str:
        shown = " + ".join(
            f"{c}*{self.variables[0]}^{e0}*{self.variables[1]}^{e1}" for (e0, e1), c in self.terms()
        )
        return f"Series2({shown or '0'}; trunc={self.trunc})"


def remap(
    series: Series2,
    fn: Callable[[Exponent], Optional[Exponent]],
    trunc: Exponent,
    variables: Tuple[str, str],
) -> Series2:
    """Move every term to fn(exponent); terms mapped to None are dropped."""
    moved: Dict[Exponent, int] = {}
    for e, c in series.terms():
        target = fn(e)
        if target is None:
            continue
        moved[target] = moved.get(target, 0) + c
    return Series2(moved, trunc, variables)


def dt_to_pt(series: Series2, trunc: Exponent) -> Series2:
    """(q0, q1)-series to (q, t) through (v0, v1) -> (n, beta) = (v0, v0 - v1)."""
    n_max = trunc[0]
    if series.trunc[0] < n_max or series.trunc[1] < n_max:
        raise PreconditionError(
            f"a {series.trunc} series cannot determine the (q, t) box {trunc}; need at least ({n_max}, {n_max})"
        )
    return remap(series, lambda e: (e[0], e[0] - e[1]) if e[1] <= e[0] else None, trunc, PT_VARIABLES)


def wall_factor(m: int, trunc: Exponent, family: WallFamily = WallFamily.W) -> Series2:
    """(1 + q0^m (-q1)^{m-1})^m on W_m, (1 + q0^m (-q1)^{m+1})^m on W'_m."""
    if m < 1:
        raise PreconditionError(f"wall index must be >= 1, got {m}")
    e1 = m - 1 if family is WallFamily.W else m + 1
    return Series2(
        {(l * m, l * e1): comb(m, l) * (-1) ** (l * e1) for l in range(m + 1)},
        trunc,
        DT_VARIABLES,
    )


def dt_series(M: int, trunc: Exponent, family: WallFamily = WallFamily.W) -> Series2:
    """Cross walls 1..M starting from the empty chamber."""
    if M < 1:
        raise PreconditionError(f"need at least one wall, got M = {M}")
    product = Series2.one(trunc, DT_VARIABLES)
    for m in range(1, M + 1):
        product = product * wall_factor(m, trunc, family)
    return product


@lru_cache(maxsize=None)
def _a_grid(n_max: int, b_max: int) -> np.ndarray:
    """a_(n, beta) for n <= n_max, beta <= b_max, adding one part size m at a time."""
    grid = np.zeros((n_max + 1, b_max + 1), dtype=object)
    grid[0, 0] = 1
    for m in range(1, n_max + 1):
        grown = grid.copy()
        for l in range(1, min(m, b_max, n_max // m) + 1):
            grown[l * m:, l:] += comb(m, l) * grid[: n_max + 1 - l * m, : b_max + 1 - l]
        grid = grown
    grid.flags.writeable = False
    return grid


def a_coeff(n: int, beta: int) -> int:
    """Sum over l with sum m*l(m) = n and sum l(m) = beta of prod binom(m, l(m))."""
    if n < 0 or beta < 0:
        raise PreconditionError(f"a_(n, beta) needs n, beta >= 0, got ({n}, {beta})")
    if beta > n:
        return 0
    return int(_a_grid(n, beta)[n, beta])


def pt_product(trunc: Exponent) -> Series2:
    """prod_{m>=1} (1 - (-q)^m t)^m in (q, t), m up to the q bound."""
    product = Series2.one(trunc, PT_VARIABLES)
    for m in range(1, trunc[0] + 1):
        sign = -((-1) ** m)
        factor = Series2({(l * m, l): comb(m, l) * sign ** l for l in range(m + 1)}, trunc, PT_VARIABLES)
        product = product * factor
    return product


def _check_sod_input(v: Exponent, M: int):
    v0, v1 = v
    if v0 < 0 or v1 < 0 or M < 0:
        raise PreconditionError(f"need v >= 0 and M >= 0, got v=({v0}, {v1}), M={M}")


def sod_count(v: Exponent, M: int, family: WallFamily = WallFamily.W) -> int:
    """Number of point-category summands after crossing walls M, M-1, ..., 1."""
    _check_sod_input(v, M)
    counts = Counter({tuple(v): 1})
    for m in range(M, 0, -1):
        crossed: Counter = Counter()
        for vec, c in counts.items():
            for summand in conifold_sod(vec, m, family):
                crossed[summand.child] += c
        counts = crossed
    return counts.get((0, 0), 0)


@dataclass(frozen=True)
class PTSummand:
    """
    One point-category summand of the fully crossed decomposition:
    a j-sequence per wall, highest wall first.
    """
    labels: Tuple[JSequence, ...]
    walls: int

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(jseq.l for jseq in self.labels)

    def label(self, wall: int) -> JSequence:
        if not 1 <= wall <= self.walls:
            raise PreconditionError(f"wall {wall} outside 1..{self.walls}")
        return self.labels[self.walls - wall]

    def to_json(self) -> Dict:
        return {
            "walls": self.walls,
            "labels": [
                {"m": self.walls - k, "l": jseq.l, "j": list(jseq.values)}
                for k, jseq in enumerate(self.labels)
            ],
        }


def pt_summands(v: Exponent, M: int, family: WallFamily = WallFamily.W) -> List[PTSummand]:
    """
    Every collection of j-sequences that crosses walls M, ..., 1 down to the
    empty chamber, in the semiorthogonal order: walls are compared from the
    highest down and the first differing j-sequence decides.
    """
    _check_sod_input(v, M)
    partial: List[Tuple[Tuple[JSequence, ...], Exponent]] = [((), tuple(v))]
    for m in range(M, 0, -1):
        partial = [
            (labels + (summand.jseq,), summand.child)
            for labels, vec in partial
            for summand in conifold_sod(vec, m, family)
        ]
    summands = [PTSummand(labels, M) for labels, vec in partial if vec == (0, 0)]
    logger.debug("v=%s across %d walls: %d summands", tuple(v), M, len(summands))
    return summands


def pt_summand_compare(first: PTSummand, second: PTSummand) -> Order:
    """Highest wall first; the first j-sequence that differs decides."""
    if first.walls != second.walls:
        raise DimensionMismatchError(f"summands cross {first.walls} and {second.walls} walls")
    for left, right in zip(first.labels, second.labels):
        outcome = jseq_compare(left, right)
        if outcome is not Order.EQUAL:
            return outcome
    return Order.EQUAL


def crosscheck(trunc: Exponent, walls: Optional[int] = None) -> Dict:
    """
    Three independent pipelines on n <= nmax, beta <= bmax:
    the PT product against a_(n,beta), the wall-crossing product against
    the PT product, and the iterated summand count against a_(n,beta).
    """
    n_max, b_max = trunc
    if n_max < 0 or b_max < 0:
        raise PreconditionError(f"truncation {trunc} has a negative bound")
    M = walls if walls is not None else max(n_max, 1)
    pt = pt_product(trunc)
    dt_pt = dt_to_pt(dt_series(M, (n_max, n_max)), trunc)
    keys = [(n, beta) for n in range(n_max + 1) for beta in range(b_max + 1)]

    def count(key: Exponent) -> int:
        n, beta = key
        return sod_count((n, n - beta), M) if beta <= n else 0

    checks = [
        agreement("P = (-1)^(n+beta) a", keys,
                  lambda k: pt.coefficient(*k), lambda k: (-1) ** (k[0] + k[1]) * a_coeff(*k)),
        agreement("wall-crossing product = P", keys,
                  lambda k: dt_pt.coefficient(*k), lambda k: pt.coefficient(*k)),
        agreement("summand count = a", keys, count, lambda k: a_coeff(*k)),
    ]
    rows: List[Dict] = [
        {"n": n, "beta": beta, "P": pt.coefficient(n, beta), "a": a_coeff(n, beta)}
        for n, beta in keys
    ]
    first_failure = None
    for check in checks:
        if not check["passed"]:
            n, beta = check["first_failure"]["key"]
            first_failure = {"check": check["name"], "n": n, "beta": beta}
            break
    logger.debug("crosscheck on %s with %d walls: %s", trunc, M, "pass" if first_failure is None else first_failure)
    return {
        "name": "crosscheck",
        "passed": first_failure is None,
        "walls": M,
        "checks": checks,
        "rows": rows,
        "first_failure": first_failure,
    }


if __name__ == "__main__":
    print("\n[SERIES - Product formula demo]")
    print("=" * 70)
    pt = pt_product((3, 2))
    for (n, beta), c in pt.terms():
        print(f"✓ P_({n},{beta}) = {c}")
    report = crosscheck((6, 4))
    print(f"{'✓' if report['passed'] else '❌'} crosscheck n<=6, beta<=4")
