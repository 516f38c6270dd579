import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import ab_sets, in_ln_set, mask_to_set, signed_count as oracle_signed
from ucfgbound import grammar_unambiguous
from ucfgbound import discrepancy as D
from ucfgbound.errors import NotACover, NotDisjoint, NotDivisibleBy4
from ucfgbound.rectangles import (OrderedPartition, SetRectangle, extract_rectangle_cover,
                                  rectangle_to_set_rectangle)


@pytest.fixture(scope="module")
def ab4():
    return D.build_ab(4)[1]


@pytest.fixture(scope="module")
def ab8():
    return D.build_ab(8)[1]


def ucfg_cover(n):
    rects, _ = extract_rectangle_cover(grammar_unambiguous(n))
    return [rectangle_to_set_rectangle(r) for r in rects]


def test_integer_bounds():
    assert [D.general_bound(m) for m in (1, 2, 3)] == [10, 101, 1024]
    assert D.icbrt(26) == 2 and D.icbrt(27) == 3
    assert [D.counting_gap(m) for m in (1, 2, 3)] == [4, 80, 1216]
    assert [D.gap_exceeds_threshold(m) for m in range(1, 7)] == [False] * 3 + [True] * 3


def test_family_shape():
    f = D.IntervalFamily(8)
    assert f.m == 2 and len(f.intervals) == 4 and f.spare == 0
    assert f.intervals[2] == 0b1111 << 8
    g = D.IntervalFamily(5)
    assert g.n == 4 and g.spare == (1 << 4) | (1 << 9)
    assert g.intervals[1] == 0b1111 << 5


def test_build_ab_requires_multiple_of_four():
    with pytest.raises(NotDivisibleBy4):
        D.build_ab(6)


@pytest.mark.parametrize("n", [4, 8])
def test_labels_match_oracle(n):
    _, ab = D.build_ab(n)
    A, B = ab_sets(n)
    assert {mask_to_set(x) for x in ab.A} == A
    assert {mask_to_set(x) for x in ab.B} == B


@pytest.mark.parametrize("n, gap", [(4, 4), (8, 80), (12, 1216)])
def test_counting_identities(n, gap):
    rep = D.verify_counting_lemma(n)
    assert rep.ok, rep.checks
    assert rep.gap == gap


def test_counting_oracle_small():
    A, B = ab_sets(4)
    gap = sum(in_ln_set(u, 4) for u in A) - sum(in_ln_set(u, 4) for u in B)
    assert gap == 4 and len(B) - len(A) == 8


def test_has_matching_pair():
    assert D.has_matching_pair((0b1001, 3)) is True
    assert D.has_matching_pair((0b0110, 3)) is False


@given(st.integers(0, 255), st.data())
def test_discrepancy_matches_oracle(seed, data):
    _, ab = D.build_ab(4)
    parts = [p for p in D.ordered_partitions(4) if p.is_balanced()]
    p = parts[data.draw(st.integers(0, len(parts) - 1))]
    r = D.sample_rectangle(p, ab, np.random.default_rng(seed), restricted=seed % 2 == 0)
    expected = oracle_signed({mask_to_set(u) for u in r.S}, {mask_to_set(v) for v in r.T}, 4)
    assert D.signed_count(r, ab) == expected


def test_signed_count_both_paths_agree(ab4):
    p = OrderedPartition(4, 1, 4)
    r = SetRectangle(p, D.submasks(p.pi0), D.submasks(p.pi1))
    assert len(r) > len(ab4.members)
    small = SetRectangle(p, r.S, [v for v in r.T if v < 64])
    assert D.signed_count(r, ab4) == sum(ab4.sign.values())
    assert D.signed_count(small, ab4) == oracle_signed(
        {mask_to_set(u) for u in small.S}, {mask_to_set(v) for v in small.T}, 4)


@pytest.mark.parametrize("n", [4, 8])
def test_restricted_bound_on_sampled_rectangles(n):
    rep = D.check_restricted_bound(n, 300, seed=7)
    assert not rep.aligned_violations
    assert rep.max_discrepancy > 0


def test_restricted_bound_tight_on_first_half(ab4, ab8):
    assert D.exact_max_discrepancy(OrderedPartition(4, 1, 4), ab4)[0] == 8
    assert D.exact_max_discrepancy(OrderedPartition(8, 1, 8), ab8)[0] == 64


def test_shifted_partition_counterexample(ab4):
    # [3, 6] cuts both interval blocks in half; the best rectangle beats 2^(3m).
    p = OrderedPartition(4, 3, 6)
    best, S, T = D.exact_max_discrepancy(p, ab4)
    assert best == 10 > D.restricted_bound(1)
    r = SetRectangle(p, S, T)
    assert abs(oracle_signed({mask_to_set(u) for u in S}, {mask_to_set(v) for v in T}, 4)) == 10
    assert D.discrepancy(r, ab4) == 10
    assert [D.exact_max_discrepancy(OrderedPartition(4, i, i + 3), ab4)[0]
            for i in range(1, 6)] == [8, 9, 10, 9, 8]


@pytest.mark.parametrize("n", [4, 8])
def test_general_bound_and_alpha_split(n):
    rep = D.check_general_bound(n, 300, seed=3)
    assert rep.ok, (rep.violations[:3], rep.decomposition_failures[:3])


def test_alpha_decomposition_has_one_term_without_bad_elements(ab8):
    p = OrderedPartition(8, 5, 12)
    r = D.sample_rectangle(p, ab8, np.random.default_rng(1), restricted=True)
    terms, exact = D.alpha_decomposition(r, ab8)
    assert exact and list(terms) == [0]


def test_neat_partitions_at_8():
    parts = D.neat_balanced_partitions(8)
    block = 0b1111
    expected = {block | block << 4, block << 4 | block << 8, block << 8 | block << 12,
                block | block << 12}
    assert {p.pi0 for p in parts} == expected


@pytest.mark.parametrize("n", [4, 8, 12])
def test_good_indices_every_neat_balanced_partition(n):
    for p in D.neat_balanced_partitions(n):
        assert D.lemma47_holds(p)


def test_good_indices_fields():
    gi = D.good_indices(OrderedPartition(8, 5, 12))
    assert gi.good == frozenset(range(1, 9))
    assert gi.i_good == (1, 2, 3, 4) and gi.pi1_bad == 0


def test_make_neat_leaves_neat_rectangles_alone(ab8):
    p = OrderedPartition(8, 1, 8)
    r = D.sample_rectangle(p, ab8, np.random.default_rng(0), restricted=True)
    assert D.make_neat(r) == [r]


@pytest.mark.parametrize("n", [4, 8, 12])
def test_make_neat_property_run(n):
    rep = D.check_make_neat(n, 60, seed=11)
    assert rep.ok, rep.failures[:3]
    assert rep.max_pieces <= 256


@given(st.integers(0, 10_000))
def test_make_neat_unrestricted_at_8(seed):
    _, ab = D.build_ab(8)
    f = ab.family
    rng = np.random.default_rng(seed)
    parts = [p for p in D.ordered_partitions(8) if p.is_balanced() and not D.is_neat(p, f)]
    p = parts[int(rng.integers(len(parts)))]
    r = D.sample_rectangle(p, ab, rng, restricted=False)
    pieces = D.make_neat(r, f)
    assert D.neat_split_problems(r, pieces, f) == []
    assert len(pieces) <= 16 ** len(D.neat_target(p, f)[1])


def test_sampling_is_reproducible():
    a = D.check_restricted_bound(4, 50, seed=5)
    b = D.check_restricted_bound(4, 50, seed=5)
    assert a.by_mode == b.by_mode and a.violations == b.violations


def test_row_cover_is_a_disjoint_cover():
    rects = D.row_cover(4)
    assert len(rects) == 15
    D.check_disjoint_cover(rects, 4)


def test_cover_checks_raise():
    rects = D.row_cover(4)
    with pytest.raises(NotACover):
        D.check_disjoint_cover(rects[1:], 4)
    with pytest.raises(NotDisjoint):
        D.check_disjoint_cover(rects + rects[:1], 4)


def test_cover_lower_bound_on_unambiguous_cover():
    rep = D.cover_lower_bound(ucfg_cover(4), 4)
    assert rep.ok, rep.checks
    assert rep.telescoping_sum == 4 and rep.ell == 40
    assert rep.implied_min_cover == 1


def test_cover_lower_bound_on_rows():
    rep = D.cover_lower_bound(D.row_cover(8), 8)
    assert rep.ok and rep.telescoping_sum == 80 and rep.ell == 255


@pytest.mark.parametrize("n, source", [(5, "ucfg"), (6, "ucfg"), (5, "rows"), (7, "rows")])
def test_spare_reduction(n, source):
    rects = ucfg_cover(n) if source == "ucfg" else D.row_cover(n)
    red = D.restrict_to_multiple_of_four(rects, n)
    assert red.n == 4
    D.check_disjoint_cover(red.rectangles, 4)
    assert max(red.pieces) <= 2 ** (2 * (n - 4))
    assert all(r.partition.is_balanced() for r in red.rectangles)
    assert D.cover_lower_bound(red.rectangles, 4).telescoping_sum == 4


def test_spare_reduction_identity_on_multiple_of_four():
    rects = D.row_cover(4)
    assert D.restrict_to_multiple_of_four(rects, 4).rectangles == rects


def test_min_neat_cover_size():
    # l^3 * 2^(10m) >= (12^m - 8^m)^3
    for m in range(1, 8):
        k = D.min_neat_cover_size(m)
        gap = D.counting_gap(m)
        assert k ** 3 << (10 * m) >= gap ** 3
        assert k == 1 or (k - 1) ** 3 << (10 * m) < gap ** 3
