"""
Conifold quiver numerics
Euler pairing, the wall families W_m and W'_m, stable dimension vectors,
Ext-quiver dimensions at a polystable point and the PT dictionary
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from errors import PreconditionError

logger = logging.getLogger(__name__)


class Side(Enum):
    """Side of a wall (or of a GIT flip)."""
    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Side.PLUS else -1


class WallFamily(Enum):
    W = "W"
    W_PRIME = "Wp"


@dataclass(frozen=True)
class DimVec:
    """Dimension vector (v_inf, v0, v1) of a framed conifold quiver representation."""
    v_inf: int
    v0: int
    v1: int

    def __post_init__(self):
        if self.v_inf not in (0, 1):
            raise PreconditionError(f"framing multiplicity must be 0 or 1, got {self.v_inf}")
        if self.v0 < 0 or self.v1 < 0:
            raise PreconditionError(f"dimension vector ({self.v0}, {self.v1}) has a negative entry")

    @property
    def pair(self) -> Tuple[int, int]:
        return self.v0, self.v1

    def to_json(self) -> Dict:
        return {"vinf": self.v_inf, "v0": self.v0, "v1": self.v1}


@dataclass(frozen=True)
class Wall:
    family: WallFamily
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise PreconditionError(f"wall index must be >= 1, got {self.m}")

    @property
    def direction(self) -> Tuple[int, int]:
        if self.family is WallFamily.W:
            return 1 - self.m, self.m
        return -self.m - 1, self.m

    @property
    def label(self) -> str:
        prime = "'" if self.family is WallFamily.W_PRIME else ""
        return f"W{prime}_{self.m}"

    def to_json(self) -> Dict:
        return {"family": self.family.value, "m": self.m}


@dataclass(frozen=True)
class ExtQuiverData:
    """
    Ext^1 dimensions at R_inf + (V (x) S) on a wall:
    a arrows inf->1, b arrows 1->inf, c loops at 1.
    loops_inf stays None when it is not known in closed form.
    """
    a: int
    b: int
    c: int
    C: int
    m: int
    d: int
    loops_inf: Optional[int] = None

    @property
    def valid(self) -> bool:
        return self.a >= self.d and self.b >= 0

    def to_json(self) -> Dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "C": self.C,
            "m": self.m,
            "d": self.d,
            "loops_inf": "unknown" if self.loops_inf is None else self.loops_inf,
            "valid": self.valid,
        }


PairLike = Union[DimVec, Tuple[int, int]]


def _as_pair(v: PairLike) -> Tuple[int, int]:
    if isinstance(v, DimVec):
        return v.pair
    v0, v1 = v
    return int(v0), int(v1)


def euler_form(e: DimVec, f: DimVec) -> int:
    """hom - ext^1 between representations of the framed conifold quiver."""
    return (e.v_inf * f.v_inf - e.v_inf * f.v0
            + e.v0 * f.v0 - 2 * e.v0 * f.v1 - 2 * e.v1 * f.v0 + e.v1 * f.v1)


def moduli_dim(v0: int, v1: int) -> int:
    return v0 - v0 ** 2 - v1 ** 2 + 4 * v0 * v1


def stable_dimvec(wall: Wall) -> DimVec:
    if wall.family is WallFamily.W:
        return DimVec(0, wall.m, wall.m - 1)
    return DimVec(0, wall.m, wall.m + 1)


def pt_dimvec(beta: int, n: int) -> DimVec:
    if beta < 0:
        raise PreconditionError(f"curve class beta = {beta} is negative")
    if n - beta < 0:
        raise PreconditionError(f"n - beta = {n - beta} is negative")
    return DimVec(1, n, n - beta)


def pt_from_dimvec(v: DimVec) -> Tuple[int, int]:
    """(beta, n) for a framed dimension vector."""
    if v.v_inf != 1:
        raise PreconditionError("PT dictionary needs a framed dimension vector (v_inf = 1)")
    return v.v0 - v.v1, v.v0


def _framing_residue(v: PairLike, wall: Wall, d: int) -> DimVec:
    v0, v1 = _as_pair(v)
    s = stable_dimvec(wall)
    r0, r1 = v0 - d * s.v0, v1 - d * s.v1
    if d < 0 or r0 < 0 or r1 < 0:
        raise PreconditionError(
            f"v - d*s = ({r0}, {r1}) is not non-negative for v = ({v0}, {v1}), {wall.label}, d = {d}"
        )
    return DimVec(1, r0, r1)


def ext_quiver_data(v: PairLike, m: int, d: int) -> ExtQuiverData:
    """Closed-form Ext-quiver dimensions for the family W_m."""
    v0, v1 = _as_pair(v)
    _framing_residue((v0, v1), Wall(WallFamily.W, m), d)
    C = (m - 2) * v0 + (m + 1) * v1
    correction = d * (-2 * m ** 2 + 2 * m + 1)
    data = ExtQuiverData(
        a=C + m + correction,
        b=C + correction,
        c=2 * m ** 2 - 2 * m,
        C=C,
        m=m,
        d=d,
    )
    logger.debug("Ext-quiver at v=(%d,%d), m=%d, d=%d: %s", v0, v1, m, d, data)
    return data


def ext_quiver_from_euler(v: PairLike, wall: Wall, d: int) -> ExtQuiverData:
    """Same dimensions read off the Euler pairing; works for both wall families."""
    r = _framing_residue(v, wall, d)
    s = stable_dimvec(wall)
    a = -euler_form(r, s)
    b = -euler_form(s, r)
    c = 1 - euler_form(s, s)
    return ExtQuiverData(a=a, b=b, c=c, C=b - d * (1 - c), m=wall.m, d=d)


def relevant_walls(v: PairLike, family: WallFamily = WallFamily.W) -> List[Tuple[Wall, int]]:
    """Walls whose stable object fits into v, each with its largest multiplicity."""
    v0, v1 = _as_pair(v)
    if v0 < 0 or v1 < 0:
        raise PreconditionError(f"dimension vector ({v0}, {v1}) has a negative entry")
    walls = []
    for m in range(1, v0 + 1):
        wall = Wall(family, m)
        s = stable_dimvec(wall)
        l_max = v0 // s.v0
        if s.v1 > 0:
            l_max = min(l_max, v1 // s.v1)
        if l_max >= 1:
            walls.append((wall, l_max))
    return walls


def theta_pairing(wall: Wall, v: PairLike) -> int:
    t0, t1 = wall.direction
    v0, v1 = _as_pair(v)
    return t0 * v0 + t1 * v1


def chamber_sign(wall: Wall, side: Side, v: PairLike) -> int:
    """Sign of theta_+- . v where theta_+- = theta +- (-eps, eps), eps symbolic."""
    pairing = theta_pairing(wall, v)
    if pairing:
        return 1 if pairing > 0 else -1
    v0, v1 = _as_pair(v)
    tie = side.sign * (v1 - v0)
    return (tie > 0) - (tie < 0)


if __name__ == "__main__":
    print("\n[QUIVER - Ext-quiver demo]")
    print("=" * 70)
    data = ext_quiver_data((4, 3), 2, 1)
    print(f"✓ v=(4,3), m=2, d=1 -> a={data.a}, b={data.b}, c={data.c}, C={data.C}")
    print(f"✓ walls for (3,2): {[(w.label, l) for w, l in relevant_walls((3, 2))]}")
