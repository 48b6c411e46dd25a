"""
Grassmannian flip combinatorics for G_{a,b}(d)
Kempf-Ness strata, window weight checks, the box-adding resolution of
window objects, the strip transform used for generation, and the ordered
semiorthogonal summands
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from diagrams import (
    Character,
    JSequence,
    Order,
    YoungDiagram,
    char_to_diagram,
    enumerate_block,
    enumerate_jseqs,
    jseq_compare,
    weight_matrix,
)
from errors import DimensionMismatchError, PreconditionError
from quiver import Side
from verification import exhaustive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlipSetup:
    """a = dim A, b = dim B, d = dim V with a >= b."""
    a: int
    b: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.d) < 0:
            raise PreconditionError(f"(a, b, d) = ({self.a}, {self.b}, {self.d}) has a negative entry")
        if self.a < self.b:
            raise PreconditionError(f"flip needs a >= b, got a={self.a}, b={self.b}")

    def to_json(self) -> Dict:
        return {"a": self.a, "b": self.b, "d": self.d}


@dataclass(frozen=True)
class KNStratum:
    """
    Kempf-Ness stratum data. slope_sq is the signed square of the slope,
    wt^2/|lambda|^2 with the sign of the slope, so orderings stay exact.
    """
    index: int
    side: Side
    lam: Tuple[int, ...]
    eta: int
    slope_sq: Fraction
    chi0_pairing: int

    def to_json(self) -> Dict:
        return {
            "i": self.index,
            "side": self.side.value,
            "lambda": list(self.lam),
            "eta": self.eta,
            "slope_sq": str(self.slope_sq),
            "chi0_pairing": self.chi0_pairing,
        }


@dataclass(frozen=True)
class WeightWindow:
    """
    Half-open weight interval of a fixed width. With epsilon_shift the lower
    end is lower + eps, so lower < w <= lower + width; otherwise
    lower <= w < lower + width.
    """
    lower: Fraction
    width: Fraction
    epsilon_shift: bool = False

    @property
    def upper(self) -> Fraction:
        return self.lower + self.width

    def contains(self, w) -> bool:
        if self.epsilon_shift:
            return self.lower < w <= self.upper
        return self.lower <= w < self.upper

    def to_json(self) -> Dict:
        return {
            "lo": str(self.lower),
            "hi": str(self.upper),
            "closed": "(]" if self.epsilon_shift else "[)",
        }


@dataclass(frozen=True)
class ResolutionStep:
    delta: YoungDiagram
    s: int
    mult: int

    def to_json(self) -> Dict:
        return {"delta": self.delta.to_json(), "s": self.s, "mult": self.mult}


@dataclass(frozen=True)
class SODSummand:
    """One summand C_j of the window category, glued from a smaller block B_b(d-l)."""
    l: int
    jseq: JSequence
    child_width: int
    child_rank: int

    @property
    def child(self) -> str:
        return f"B_{self.child_width}({self.child_rank})"

    @property
    def child_size(self) -> int:
        return comb(self.child_width, self.child_rank)

    def to_json(self) -> Dict:
        return {
            "l": self.l,
            "jseq": self.jseq.to_json(),
            "child": self.child,
            "child_size": self.child_size,
        }


def one_parameter_subgroup(side: Side, i: int, d: int) -> Tuple[int, ...]:
    if side is Side.PLUS:
        return (0,) * i + (-1,) * (d - i)
    return (1,) * (d - i) + (0,) * i


def standard_weights(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.int64)


def root_weights(d: int) -> np.ndarray:
    """Roots e_j - e_k of gl(d), j != k."""
    eye = standard_weights(d)
    roots = [eye[j] - eye[k] for j in range(d) for k in range(d) if j != k]
    return np.array(roots, dtype=np.int64).reshape(len(roots), d)


def grassmann_weights(setup: FlipSetup) -> Tuple[np.ndarray, np.ndarray]:
    """Torus weights of Y = Hom(A,V) + Hom(V,B) and of gl(V) (roots plus Cartan)."""
    eye = standard_weights(setup.d)
    y = np.vstack([np.tile(eye, (setup.a, 1)), np.tile(-eye, (setup.b, 1))])
    g = np.vstack([root_weights(setup.d), np.zeros((setup.d, setup.d), dtype=np.int64)])
    return y, g


def _positive_dual_pairing(lam: np.ndarray, weights) -> int:
    w = np.asarray(weights, dtype=np.int64).reshape(-1, len(lam))
    pairings = -(w @ lam)
    return int(pairings[pairings > 0].sum())


def generic_eta(lam: Sequence[int], y_weights, g_weights) -> int:
    """<lam, (Y^v)^{lam>0}> - <lam, (g^v)^{lam>0}>; weights are given undualized."""
    lam = np.asarray(lam, dtype=np.int64)
    return _positive_dual_pairing(lam, y_weights) - _positive_dual_pairing(lam, g_weights)


def make_stratum(index: int, side: Side, lam: Tuple[int, ...], eta: int) -> KNStratum:
    chi0_pairing = sum(lam)
    # the linearization is det on side + and det^{-1} on side -
    wt = chi0_pairing if side is Side.PLUS else -chi0_pairing
    norm_sq = sum(x * x for x in lam)
    return KNStratum(
        index=index,
        side=side,
        lam=lam,
        eta=eta,
        slope_sq=Fraction(-wt * abs(wt), norm_sq),
        chi0_pairing=chi0_pairing,
    )


def kn_strata(setup: FlipSetup, side: Side) -> List[KNStratum]:
    y, g = grassmann_weights(setup)
    strata = []
    for i in range(setup.d):
        lam = one_parameter_subgroup(side, i, setup.d)
        strata.append(make_stratum(i, side, lam, generic_eta(lam, y, g)))
    return strata


def default_window(stratum: KNStratum) -> WeightWindow:
    """Side + keeps (-eta, 0], side - keeps [0, eta)."""
    eta = Fraction(stratum.eta)
    if stratum.side is Side.PLUS:
        return WeightWindow(-eta, eta, epsilon_shift=True)
    return WeightWindow(Fraction(0), eta)


def lambda_pairings(chi: Character, lam: Sequence[int]) -> np.ndarray:
    """<lam, chi'> for every weight chi' of V(chi), with multiplicity."""
    if chi.d != len(lam):
        raise DimensionMismatchError(f"character of rank {chi.d} paired with {len(lam)}-vector")
    return weight_matrix(chi) @ np.asarray(lam, dtype=np.int64)


def window_weight_check(
    chi: Character,
    stratum: KNStratum,
    m_i: Union[None, int, Fraction, WeightWindow] = None,
) -> bool:
    """
    Every lambda_i-weight of V(chi) lies in [m_i, m_i + eta_i).
    Without m_i the stratum's default window is used.
    """
    if m_i is None:
        window = default_window(stratum)
    elif isinstance(m_i, WeightWindow):
        window = m_i
    else:
        window = WeightWindow(Fraction(m_i), Fraction(stratum.eta))
    return all(window.contains(int(p)) for p in lambda_pairings(chi, stratum.lam))


def resolution_block_width(delta: YoungDiagram, d: int, b: int) -> int:
    """Smallest c >= b with delta in B_c(d-1)."""
    return max(b, delta.width + d - 1)


def resolve(delta: YoungDiagram, d: int, b: int) -> List[ResolutionStep]:
    """
    Resolve a window object of rank d-1 by rank d ones: step i raises
    column i to height d (i = 1) or to mu_{i-1} + 1, with s_i boxes added
    and multiplicity binom(b, s_i). Stops at the first s_i > b.
    """
    if d < 1 or delta.height > d - 1:
        raise PreconditionError(f"diagram with {delta.height} rows needs at most d - 1 = {d - 1} rows")
    if b < 0:
        raise PreconditionError(f"b = {b} is negative")
    mu = delta.columns()
    logger.debug("resolving %s in B_%d(%d)", delta.rows, resolution_block_width(delta, d, b), d - 1)

    def height(j: int) -> int:
        return mu[j - 1] if 1 <= j <= len(mu) else 0

    cols = list(mu)
    steps = []
    i = 1
    while True:
        s = d + i - 1 - height(i)
        if s > b:
            break
        target = d if i == 1 else height(i - 1) + 1
        if i > len(cols):
            cols.append(target)
        else:
            cols[i - 1] = target
        steps.append(ResolutionStep(YoungDiagram.from_columns(cols), s, comb(b, s)))
        i += 1
    logger.debug("resolution has %d steps", len(steps))
    return steps


def strip_transform(delta: YoungDiagram, d: int) -> YoungDiagram:
    """Remove the full first column and one box from every other column."""
    mu = delta.columns()
    if not mu or mu[0] != d:
        first = mu[0] if mu else 0
        raise PreconditionError(f"first column has height {first}, expected a full column of height {d}")
    return YoungDiagram.from_columns([h - 1 for h in mu[1:]])


def sod_summands(setup: FlipSetup, c: int) -> List[SODSummand]:
    """Summands of the width-c window, largest j-sequence first."""
    if c < setup.b:
        raise PreconditionError(f"window width c = {c} is below b = {setup.b}")
    summands = []
    for l in range(setup.d + 1):
        for jseq in enumerate_jseqs(l, c - setup.b - l, setup.d):
            summands.append(SODSummand(l, jseq, setup.b, setup.d - l))
    summands.sort(key=lambda s: s.jseq.padded(), reverse=True)
    logger.debug("window B_%d(%d) splits into %d summands", c, setup.d, len(summands))
    return summands


def hom_vanishes(first: JSequence, second: JSequence) -> bool:
    return jseq_compare(first, second) is Order.GREATER


def verify_flip_windows(setup: FlipSetup) -> Dict:
    """Window inclusion over B_a(d) on side + and B_b(d) on side -."""
    cases = []
    for side, width in ((Side.PLUS, setup.a), (Side.MINUS, setup.b)):
        strata = kn_strata(setup, side)
        cases.extend((chi, stratum) for chi in enumerate_block(width, setup.d) for stratum in strata)
    return exhaustive(
        f"flip windows {setup.a},{setup.b},{setup.d}",
        cases,
        lambda case: window_weight_check(*case),
        describe=lambda case: {"chi": case[0].to_json(), "stratum": case[1].to_json()},
    )


def verify_generation(b: int, d: int) -> Dict:
    """
    For every full-height delta in B_{b+1}(d) of width b - d + 1, stripping
    and resolving with width b rebuilds delta at the last step, with s = b.
    """
    def full(delta: YoungDiagram) -> bool:
        return bool(delta.rows) and delta.height == d and delta.width == b + 1 - d

    def rebuilt(delta: YoungDiagram) -> bool:
        stripped = strip_transform(delta, d)
        steps = resolve(stripped, d, b)
        return (
            delta.size() - stripped.size() == b
            and len(steps) == b - d + 1
            and steps[-1].delta == delta
            and steps[-1].s == b
            and steps[-1].mult == 1
        )

    diagrams = [char_to_diagram(chi) for chi in enumerate_block(b + 1, d)] if d >= 1 else []
    return exhaustive(
        f"generation b={b} d={d}",
        [delta for delta in diagrams if full(delta)],
        rebuilt,
        describe=lambda delta: delta.to_json(),
    )


if __name__ == "__main__":
    print("\n[FLIP - Resolution demo]")
    print("=" * 70)
    for step in resolve(YoungDiagram((4, 2, 1)), d=4, b=7):
        print(f"✓ {step.delta.rows}  s={step.s}  mult={step.mult}")
    setup = FlipSetup(8, 6, 2)
    for side in Side:
        print(f"✓ eta side {side.value}: {[s.eta for s in kn_strata(setup, side)]}")
