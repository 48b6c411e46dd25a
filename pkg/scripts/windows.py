"""
Window bookkeeping on a conifold wall
Local Ext-quiver strata, the gamma correction from W = End_0(V) (x) C^h,
window offsets, Koszul weight-interval certificates and the exponents
attached to categorified Hall products
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from diagrams import Character, JSequence, Tableau, enumerate_block, enumerate_jseqs, weighted_tableaux
from errors import DimensionMismatchError, PreconditionError
from flip import (
    KNStratum,
    WeightWindow,
    generic_eta,
    make_stratum,
    one_parameter_subgroup,
    root_weights,
    standard_weights,
)
from quiver import (
    ExtQuiverData,
    Side,
    Wall,
    WallFamily,
    ext_quiver_data,
    ext_quiver_from_euler,
    stable_dimvec,
)
from verification import exhaustive

logger = logging.getLogger(__name__)

# largest rank for which the weights of wedge^k W are enumerated exactly
EXACT_WEDGE_MAX_RANK = 3


@dataclass(frozen=True)
class WallWindowSetup:
    """Polystable point R_inf + (V (x) S) with dim V = d on a wall of index m."""
    v0: int
    v1: int
    m: int
    d: int
    family: WallFamily = WallFamily.W

    def __post_init__(self):
        # ext_quiver_data rejects v - d*s with a negative entry
        _ = self.ext

    @property
    def wall(self) -> Wall:
        return Wall(self.family, self.m)

    @property
    def ext(self) -> ExtQuiverData:
        if self.family is WallFamily.W:
            return ext_quiver_data((self.v0, self.v1), self.m, self.d)
        return ext_quiver_from_euler((self.v0, self.v1), self.wall, self.d)

    @property
    def half_loops(self) -> int:
        """h with W = End_0(V) (x) C^h; m^2 - m on W_m."""
        return self.ext.c // 2

    @property
    def wedge_rank(self) -> int:
        return (self.d * self.d - 1) * self.half_loops if self.d else 0

    def to_json(self) -> Dict:
        return {
            "v": [self.v0, self.v1],
            "m": self.m,
            "d": self.d,
            "wall": self.wall.to_json(),
            "ext": self.ext.to_json(),
        }


@dataclass(frozen=True)
class TwistDescriptor:
    l: int
    jseq: JSequence
    per_factor_weights: Tuple[int, ...]
    tail_twist: int
    knoerrer_weights: Tuple[int, ...]
    shift: int

    def to_json(self) -> Dict:
        return {
            "l": self.l,
            "jseq": self.jseq.to_json(),
            "per_factor_weights": list(self.per_factor_weights),
            "tail_twist": self.tail_twist,
            "knoerrer_weights": list(self.knoerrer_weights),
            "shift": self.shift,
        }


@dataclass(frozen=True)
class ConifoldSummand:
    l: int
    jseq: JSequence
    child: Tuple[int, int]
    twist: TwistDescriptor

    def to_json(self) -> Dict:
        return {
            "l": self.l,
            "jseq": self.jseq.to_json(),
            "child": list(self.child),
            "twist": self.twist.to_json(),
        }


@dataclass(frozen=True)
class KoszulCertificate:
    """
    Outcome of checking wt(V(chi) (x) wedge^k W (x) det^{d h}) against a window.
    lowest/highest are the extreme checked weights; the bound fields repeat
    the check using only 0 <= x' <= width - d and the range [-gamma, gamma].
    """
    passed: bool
    exact: bool
    interval: WeightWindow
    lowest: int
    highest: int
    worst_weight: int
    witness_tableau: Tableau
    bound_passed: bool
    bound_range: Tuple[int, int]

    def to_json(self) -> Dict:
        return {
            "pass": self.passed,
            "exact": self.exact,
            "interval": self.interval.to_json(),
            "extremes": [self.lowest, self.highest],
            "worst_weight": self.worst_weight,
            "witness_tableau": [list(row) for row in self.witness_tableau],
            "bound_pass": self.bound_passed,
            "bound_range": list(self.bound_range),
        }


def root_pairings(lam: Sequence[int]) -> List[int]:
    """<lam, e_j - e_k> over all roots of gl(d)."""
    return [lam[j] - lam[k] for j in range(len(lam)) for k in range(len(lam)) if j != k]


def _half_loops(m: int, half_loops: Optional[int]) -> int:
    if m < 1:
        raise PreconditionError(f"wall index must be >= 1, got {m}")
    return m * m - m if half_loops is None else half_loops


def gamma(lam: Sequence[int], m: int, half_loops: Optional[int] = None) -> int:
    """<lam, W^{lam>0}> for W = End_0(V) (x) C^h, h = m^2 - m unless given."""
    h = _half_loops(m, half_loops)
    return h * sum(p for p in root_pairings(lam) if p > 0)


def gamma_negative(lam: Sequence[int], m: int, half_loops: Optional[int] = None) -> int:
    """-<lam, W^{lam<0}>; equal to gamma since W is self-dual."""
    h = _half_loops(m, half_loops)
    return -h * sum(p for p in root_pairings(lam) if p < 0)


def koszul_weight_counts(lam: Sequence[int], half_loops: int) -> Counter:
    """lam-weights of W with multiplicity: roots h times each, (d-1)h zeros."""
    counts = Counter()
    for p in root_pairings(lam):
        counts[p] += half_loops
    if lam:
        counts[0] += (len(lam) - 1) * half_loops
    return +counts


@lru_cache(maxsize=None)
def wedge_weight_sums(lam: Tuple[int, ...], half_loops: int) -> Mapping[int, FrozenSet[int]]:
    """
    k -> set of lam-weights of wedge^k W. A weight of wedge^k is a sum of
    k distinct basis weights, so a subset-sum over the weight multiset.
    The cached mapping is read-only.
    """
    reach = {0: {0}}
    for value, mult in sorted(koszul_weight_counts(lam, half_loops).items()):
        grown = {}
        for k, sums in reach.items():
            for t in range(mult + 1):
                grown.setdefault(k + t, set()).update(s + t * value for s in sums)
        reach = grown
    return MappingProxyType({k: frozenset(sums) for k, sums in reach.items()})


def wall_strata(setup: WallWindowSetup, side: Side) -> List[KNStratum]:
    """
    KN strata of the local Ext-quiver model: Y = Hom(A,V) + Hom(V,B) +
    End(V) (x) C^c with dim A = a, dim B = b.
    """
    return list(_wall_strata(setup, side))


@lru_cache(maxsize=None)
def _wall_strata(setup: WallWindowSetup, side: Side) -> Tuple[KNStratum, ...]:
    ext = setup.ext
    d = setup.d
    eye = standard_weights(d)
    roots = root_weights(d)
    copies = [max(n, 0) for n in (ext.a, ext.b, ext.c)]
    y = np.vstack([np.tile(eye, (copies[0], 1)), np.tile(-eye, (copies[1], 1)), np.tile(roots, (copies[2], 1))])
    g = np.vstack([roots, np.zeros((d, d), dtype=np.int64)])
    strata = []
    for i in range(d):
        lam = one_parameter_subgroup(side, i, d)
        strata.append(make_stratum(i, side, lam, generic_eta(lam, y, g)))
    return tuple(strata)


def window_offsets(setup: WallWindowSetup, i: int, side: Side, eta: int, chi0_pairing: int) -> Fraction:
    """m_i^+ = -eta/2 + (C/2 + m/2) <lam, chi0>;  m_i^- = -eta/2 + (C/2) <lam, chi0>."""
    coefficient = Fraction(setup.ext.C, 2)
    if side is Side.PLUS:
        coefficient += Fraction(setup.m, 2)
    return -Fraction(eta, 2) + coefficient * chi0_pairing


def _stratum(setup: WallWindowSetup, i: int, side: Side) -> KNStratum:
    if not 0 <= i < setup.d:
        raise PreconditionError(f"stratum index {i} outside 0..{setup.d - 1}")
    return _wall_strata(setup, side)[i]


def window_interval(setup: WallWindowSetup, i: int, side: Side = Side.PLUS) -> WeightWindow:
    stratum = _stratum(setup, i, side)
    lower = window_offsets(setup, i, side, stratum.eta, stratum.chi0_pairing)
    return WeightWindow(lower, Fraction(stratum.eta))


@lru_cache(maxsize=None)
def _tableau_weights(chi: Character) -> Tuple:
    return tuple(weighted_tableaux(chi))


def _block_width(setup: WallWindowSetup, side: Side) -> int:
    return setup.ext.a if side is Side.PLUS else setup.ext.b


def _check_in_block(chi: Character, width: int, d: int):
    if chi.d != d:
        raise DimensionMismatchError(f"character of rank {chi.d} at a point with d = {d}")
    top = width - d
    for idx, x in enumerate(chi.entries, start=1):
        if x < 0 or x > top:
            raise PreconditionError(f"x_{idx} = {x} outside [0, {top}] for block B_{width}({d})")


def verify_koszul_window(
    setup: WallWindowSetup,
    chi: Character,
    k: int,
    i: int,
    side: Side = Side.PLUS,
) -> KoszulCertificate:
    width = _block_width(setup, side)
    _check_in_block(chi, width, setup.d)
    if not 0 <= k <= setup.wedge_rank:
        raise PreconditionError(f"k = {k} outside 0..{setup.wedge_rank} = dim W")
    stratum = _stratum(setup, i, side)
    window = window_interval(setup, i, side)
    lam = stratum.lam
    h = setup.half_loops
    shift = setup.d * h * stratum.chi0_pairing
    g = gamma(lam, setup.m, h)

    exact = setup.d <= EXACT_WEDGE_MAX_RANK
    if exact:
        sums = wedge_weight_sums(tuple(lam), h)[k]
        wedge_low, wedge_high = min(sums), max(sums)
    else:
        wedge_low, wedge_high = -g, g

    lowest = highest = worst = None
    worst_slack = None
    witness = ()
    for tableau, weight in _tableau_weights(chi):
        p = sum(a * x for a, x in zip(lam, weight)) + shift
        for w in (p + wedge_low, p + wedge_high):
            slack = min(w - window.lower, window.upper - w)
            if worst_slack is None or slack < worst_slack:
                worst_slack, worst, witness = slack, w, tableau
            lowest = w if lowest is None else min(lowest, w)
            highest = w if highest is None else max(highest, w)
    passed = window.contains(lowest) and window.contains(highest)

    reach = (setup.d - i) * (width - setup.d)
    pair_low, pair_high = (-reach, 0) if side is Side.PLUS else (0, reach)
    bound_range = (pair_low + shift - g, pair_high + shift + g)
    bound_passed = window.contains(bound_range[0]) and window.contains(bound_range[1])

    return KoszulCertificate(
        passed=passed,
        exact=exact,
        interval=window,
        lowest=lowest,
        highest=highest,
        worst_weight=worst,
        witness_tableau=witness,
        bound_passed=bound_passed,
        bound_range=bound_range,
    )


def verify_koszul_block(setup: WallWindowSetup, side: Side = Side.PLUS) -> Dict:
    """verify_koszul_window over every chi in the block, every k and every stratum."""
    cases = [
        (chi, k, i)
        for chi in enumerate_block(_block_width(setup, side), setup.d)
        for k in range(setup.wedge_rank + 1)
        for i in range(setup.d)
    ]

    def holds(case) -> bool:
        cert = verify_koszul_window(setup, *case, side=side)
        return cert.passed and cert.bound_passed

    return exhaustive(
        f"koszul window v=({setup.v0},{setup.v1}) m={setup.m} d={setup.d} side {side.value}",
        cases,
        holds,
        describe=lambda case: {"chi": case[0].to_json(), "k": case[1], "i": case[2]},
    )


def hall_twists(l: int, jseq: JSequence, m: int, d: int, half_loops: Optional[int] = None) -> TwistDescriptor:
    h = _half_loops(m, half_loops)
    if jseq.l != l:
        raise PreconditionError(f"j-sequence has length {jseq.l}, expected {l}")
    if l > d:
        raise PreconditionError(f"l = {l} exceeds d = {d}")
    if l and jseq.values[-1] > m - l:
        raise PreconditionError(f"j_l = {jseq.values[-1]} exceeds m - l = {m - l}")
    per_factor = tuple(j + (2 * i - 1) * h for i, j in enumerate(jseq.values, start=1))
    tail = jseq.values[-1] + 2 * l * h if l else 0
    knoerrer = tuple((2 * i - d - 1) * h for i in range(1, l + 1))
    doubled = l * (2 * d - l - 1) * h
    assert doubled % 2 == 0, "dl - l/2 - l^2/2 must be integral"
    return TwistDescriptor(l, jseq, per_factor, tail, knoerrer, doubled // 2)


def hall_lambda(l: int, d: int) -> Tuple[int, ...]:
    """lambda(t) = (t^l, t^{l-1}, ..., t, 1, ..., 1)."""
    if not 0 <= l <= d:
        raise PreconditionError(f"need 0 <= l <= d, got l={l}, d={d}")
    return tuple(range(l, 0, -1)) + (0,) * (d - l)


def end0_positive_dim(l: int, d: int) -> int:
    """dim End_0(V)^{lambda>0} for the Hall cocharacter, by counting roots."""
    return sum(1 for p in root_pairings(hall_lambda(l, d)) if p > 0)


def knoerrer_det_exponents(l: int, d: int) -> Dict[int, int]:
    """
    Exponent of det V_k in det(End_0(V)^{lambda>0})^dual, where V_k is the
    lambda-weight k part (dim V_0 = d - l, dim V_k = 1 otherwise).
    """
    if not 0 <= l <= d:
        raise PreconditionError(f"need 0 <= l <= d, got l={l}, d={d}")
    dims = [d - l] + [1] * l
    # det(V_i (x) V_j^dual) = det(V_i)^{n_j} det(V_j)^{-n_i}
    return {
        k: sum(dims[j] for j in range(k + 1, l + 1)) - sum(dims[i] for i in range(k))
        for k in range(l + 1)
    }


def conifold_sod(
    v: Tuple[int, int],
    m: int,
    family: WallFamily = WallFamily.W,
    rank: Optional[int] = None,
) -> List[ConifoldSummand]:
    """
    Summands of the window category at v across the wall of index m:
    binom(m, l) copies of the child v - l*s for each l, largest j-sequence first.
    j-sequences are padded to depth = min(largest l that fits, m).

    rank is dim V of the local model the twists are computed in; it defaults
    to depth and must be at least depth. Only knoerrer_weights and shift
    depend on it.
    """
    wall = Wall(family, m)
    s = stable_dimvec(wall)
    v0, v1 = v
    if v0 < 0 or v1 < 0:
        raise PreconditionError(f"dimension vector ({v0}, {v1}) has a negative entry")
    l_fit = min(v0 // s.v0, v1 // s.v1 if s.v1 else v0 // s.v0)
    depth = min(l_fit, m)
    if rank is None:
        rank = depth
    elif rank < depth:
        raise PreconditionError(f"rank {rank} is below the depth {depth} of v=({v0},{v1}) on {wall.label}")
    h = m * m - m if family is WallFamily.W else m * m + m
    summands = []
    for l in range(depth + 1):
        child = (v0 - l * s.v0, v1 - l * s.v1)
        for jseq in enumerate_jseqs(l, m - l, depth):
            summands.append(ConifoldSummand(l, jseq, child, hall_twists(l, jseq, m, rank, half_loops=h)))
    summands.sort(key=lambda summand: summand.jseq.padded(), reverse=True)
    logger.debug("v=(%d,%d) across %s: %d summands", v0, v1, wall.label, len(summands))
    return summands


if __name__ == "__main__":
    print("\n[WINDOWS - Koszul window demo]")
    print("=" * 70)
    setup = WallWindowSetup(4, 3, 2, 1)
    print(f"✓ m_0^+ interval: {window_interval(setup, 0).to_json()}")
    report = verify_koszul_block(setup)
    print(f"{'✓' if report['passed'] else '❌'} Koszul window over B_{setup.ext.a}(1): {report['checked']} cases")
    print(f"✓ summands at v=(2,1), m=2: {len(conifold_sod((2, 1), 2))}")
