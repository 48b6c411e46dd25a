from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from diagrams import Character, JSequence, enumerate_block, enumerate_jseqs
from errors import PreconditionError
from flip import one_parameter_subgroup
from quiver import Side, WallFamily
from windows import (
    WallWindowSetup,
    conifold_sod,
    end0_positive_dim,
    gamma,
    gamma_negative,
    hall_lambda,
    hall_twists,
    knoerrer_det_exponents,
    verify_koszul_block,
    verify_koszul_window,
    wall_strata,
    wedge_weight_sums,
    window_interval,
)

KOSZUL_SETUPS = [((4, 3), 2, 1), ((6, 4), 2, 2), ((3, 2), 1, 1)]


def geometric_setups(max_v0=6, max_m=3, max_d=2):
    """Valid wall points (v, m, d) with v0 <= max_v0."""
    for v0 in range(max_v0 + 1):
        for v1 in range(v0 + 1):
            for m in range(1, max_m + 1):
                for d in range(1, max_d + 1):
                    if v0 < d * m or v1 < d * (m - 1):
                        continue
                    setup = WallWindowSetup(v0, v1, m, d)
                    if setup.ext.valid:
                        yield setup


@st.composite
def subgroup_strategy(draw, max_d=5):
    d = draw(st.integers(min_value=1, max_value=max_d))
    return tuple(draw(st.lists(st.integers(min_value=-3, max_value=3), min_size=d, max_size=d)))


def test_gamma_examples():
    assert gamma((0, -1), 2) == 2
    assert gamma((0, 0, 0), 3) == 0
    with pytest.raises(PreconditionError):
        gamma((0, -1), 0)


def test_gamma_on_flip_subgroups():
    for d in range(1, 7):
        for i in range(d):
            for m in range(1, 7):
                lam = one_parameter_subgroup(Side.PLUS, i, d)
                assert gamma(lam, m) == i * (d - i) * (m * m - m)


@given(subgroup_strategy(), st.integers(min_value=1, max_value=5))
def test_gamma_is_self_dual(lam, m):
    assert gamma(lam, m) == gamma_negative(lam, m)


def test_wedge_sums_for_a_line_are_trivial():
    assert dict(wedge_weight_sums((-1,), 2)) == {0: frozenset({0})}


def test_cached_wedge_sums_cannot_be_mutated():
    sums = wedge_weight_sums((0, -1), 2)
    with pytest.raises(TypeError):
        sums[1] = frozenset({99})
    assert wedge_weight_sums((0, -1), 2)[1] == frozenset({-1, 0, 1})


def test_wedge_sums_in_rank_two():
    # W = End_0(C^2) (x) C^2 has lam-weights 1, 1, -1, -1, 0, 0
    sums = wedge_weight_sums((0, -1), 2)
    assert set(sums) == set(range(7))
    assert sums[1] == frozenset({-1, 0, 1})
    assert sums[6] == frozenset({0})
    assert max(sums[2]) == 2 == gamma((0, -1), 2)


def test_window_offset_worked_example():
    window = window_interval(WallWindowSetup(4, 3, 2, 1), 0)
    assert window.lower == Fraction(-19, 2)
    assert window.width == 8


def test_wall_strata_eta():
    for setup in geometric_setups():
        ext, d, h = setup.ext, setup.d, setup.half_loops
        for side, width in ((Side.PLUS, ext.a), (Side.MINUS, ext.b)):
            for stratum in wall_strata(setup, side):
                i = stratum.index
                assert stratum.eta == (width - i) * (d - i) + 2 * gamma(stratum.lam, setup.m, h)


def test_interval_endpoints_match_expanded_forms():
    for setup in geometric_setups(max_v0=8, max_m=4, max_d=3):
        a, d, m = setup.ext.a, setup.d, setup.m
        for i in range(d):
            g = gamma(one_parameter_subgroup(Side.PLUS, i, d), m)
            window = window_interval(setup, i)
            assert window.lower == (d - i) * (-a + Fraction(i, 2) + Fraction(d, 2) - d * m * m + d * m) - g
            assert window.upper == (d - i) * (-d * m * m + d * m + Fraction(d, 2) - Fraction(i, 2)) + g


def test_trivial_character_sits_at_the_twist():
    for setup in geometric_setups():
        h = setup.half_loops
        for i in range(setup.d):
            cert = verify_koszul_window(setup, Character((0,) * setup.d), 0, i)
            assert cert.passed
            assert cert.lowest == cert.highest == -(setup.d - i) * setup.d * h


def test_koszul_certificate_fields():
    setup = WallWindowSetup(6, 4, 2, 2)
    cert = verify_koszul_window(setup, Character((2, 6)), 3, 1)
    assert cert.passed and cert.bound_passed and cert.exact
    assert cert.interval.contains(cert.worst_weight)
    payload = cert.to_json()
    assert payload["pass"] is True
    assert payload["interval"]["closed"] == "[)"
    assert len(payload["witness_tableau"]) == 2


def test_koszul_window_rejects_characters_outside_the_block():
    setup = WallWindowSetup(4, 3, 2, 1)
    with pytest.raises(PreconditionError, match="x_1 = 8"):
        verify_koszul_window(setup, Character((8,)), 0, 0)
    with pytest.raises(PreconditionError):
        verify_koszul_window(setup, Character((0,)), 1, 0)


@pytest.mark.parametrize("v, m, d", KOSZUL_SETUPS)
def test_koszul_windows_on_named_points(v, m, d):
    setup = WallWindowSetup(v[0], v[1], m, d)
    report = verify_koszul_block(setup)
    assert report["passed"], report
    expected = comb(setup.ext.a, d) * (setup.wedge_rank + 1) * d
    assert report["checked"] == expected


def test_koszul_windows_on_all_small_points():
    for setup in geometric_setups():
        for side in Side:
            report = verify_koszul_block(setup, side)
            assert report["passed"], report


def test_line_case_reduces_to_flip_window():
    setup = WallWindowSetup(4, 3, 2, 1)
    assert setup.wedge_rank == 0
    for chi in enumerate_block(setup.ext.a, 1):
        cert = verify_koszul_window(setup, chi, 0, 0)
        assert cert.lowest == cert.highest == -chi.entries[0] - 2


def test_hall_twists_worked_example():
    twist = hall_twists(1, JSequence((0,), 1), m=2, d=1)
    assert twist.per_factor_weights == (2,)
    assert twist.tail_twist == 4
    assert twist.knoerrer_weights == (0,)
    assert twist.shift == 0


def test_hall_twists_empty():
    twist = hall_twists(0, JSequence((), 3), m=4, d=3)
    assert twist.per_factor_weights == () and twist.knoerrer_weights == ()
    assert twist.shift == 0 and twist.tail_twist == 0


def test_hall_twists_preconditions():
    with pytest.raises(PreconditionError):
        hall_twists(1, JSequence((2,), 2), m=2, d=2)
    with pytest.raises(PreconditionError):
        hall_twists(2, JSequence((0,), 2), m=3, d=2)


def test_hall_twist_shift_is_integral_and_matches():
    for d in range(11):
        for l in range(d + 1):
            for m in range(max(l, 1), 11):
                twist = hall_twists(l, JSequence((0,) * l, d), m, d)
                assert 2 * twist.shift == (2 * d * l - l - l * l) * (m * m - m)


def test_per_factor_weights_increase():
    for m in range(2, 7):
        for l in range(m + 1):
            for jseq in enumerate_jseqs(l, m - l, l):
                weights = hall_twists(l, jseq, m, l).per_factor_weights
                assert all(x < y for x, y in zip(weights, weights[1:]))


def test_end0_positive_part_dimension():
    for d in range(9):
        for l in range(d + 1):
            assert hall_lambda(l, d)[:l] == tuple(range(l, 0, -1))
            assert 2 * end0_positive_dim(l, d) == 2 * d * l - l - l * l


def test_det_exponents_match_knoerrer_twists():
    for d in range(1, 8):
        for l in range(d + 1):
            exponents = knoerrer_det_exponents(l, d)
            assert exponents[0] == l
            for k in range(1, l + 1):
                assert exponents[k] == 2 * l - 2 * k + 1 - d
            knoerrer = hall_twists(l, JSequence((0,) * l, d), 7, d).knoerrer_weights
            # det V_k twists the factor carrying j_{l-k+1}
            assert [exponents[l - i + 1] * 42 for i in range(1, l + 1)] == list(knoerrer)


def test_conifold_sod_at_the_stable_object():
    for m in range(1, 7):
        summands = conifold_sod((m, m - 1), m)
        assert sorted({s.l for s in summands}) == [0, 1]
        ones = [s for s in summands if s.l == 1]
        assert len(ones) == m
        assert all(s.child == (0, 0) for s in ones)


def test_conifold_sod_of_zero():
    summands = conifold_sod((0, 0), 3)
    assert len(summands) == 1 and summands[0].l == 0


@given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12),
       st.integers(min_value=1, max_value=6), st.sampled_from(list(WallFamily)))
def test_conifold_sod_counts_and_order(v0, v1, m, family):
    summands = conifold_sod((v0, v1), m, family)
    for l in {s.l for s in summands}:
        assert sum(1 for s in summands if s.l == l) == comb(m, l)
    keys = [s.jseq.padded() for s in summands]
    assert keys == sorted(keys, reverse=True)
    assert all(min(s.child) >= 0 for s in summands)


def test_second_family_uses_its_own_loops():
    summands = conifold_sod((2, 3), 2, WallFamily.W_PRIME)
    ones = [s for s in summands if s.l == 1]
    assert len(ones) == 2
    assert all(s.twist.per_factor_weights == (s.jseq.values[0] + 6,) for s in ones)


def test_conifold_sod_rank_defaults_to_the_depth():
    default = conifold_sod((4, 3), 2)
    assert max(s.l for s in default) == 2
    assert conifold_sod((4, 3), 2, rank=2) == default
    with pytest.raises(PreconditionError):
        conifold_sod((4, 3), 2, rank=1)


def test_conifold_sod_rank_only_moves_the_knoerrer_twist():
    h = 2
    default = conifold_sod((4, 3), 2)
    wider = conifold_sod((4, 3), 2, rank=5)
    assert [s.jseq for s in wider] == [s.jseq for s in default]
    for narrow, wide in zip(default, wider):
        assert wide.twist.per_factor_weights == narrow.twist.per_factor_weights
        assert wide.twist.tail_twist == narrow.twist.tail_twist
        assert wide.twist.knoerrer_weights == tuple((2 * i - 6) * h for i in range(1, wide.l + 1))
        assert 2 * wide.twist.shift == wide.l * (10 - wide.l - 1) * h
