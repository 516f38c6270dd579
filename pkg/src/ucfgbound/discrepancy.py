"""Exact discrepancy checks for set rectangles against the A/B labelling.

Universe elements are 1-based indices into z_1..z_2n, stored as bits of an
int (bit k-1 for z_k).  The interval family cuts X and Y into blocks of four
consecutive elements; the family 𝓛 picks exactly one element from every
block, and A is the part of 𝓛 with an odd number of matched pairs
(x_i and y_i both picked).

Non-integer bounds such as 2^(10m/3) and 2^(7m/2) are compared with integer
powers only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .constructions import ln_mask_members
from .errors import CapExceeded, NotACover, NotDisjoint, NotDivisibleBy4, UnbalanceableAtThisN
from .rectangles import OrderedPartition, SetRectangle, SetWord, interval_mask

AB_CAP = 12


def popcount(x: int) -> int:
    return bin(x).count("1")


def _low(n):
    return (1 << n) - 1


def matched_pairs(mask: int, n: int) -> int:
    """Number of i with both x_i and y_i in the set."""
    return popcount(mask & (mask >> n) & _low(n))


def has_matching_pair(s) -> bool:
    mask, n = (s.mask, s.n) if isinstance(s, SetWord) else s
    return bool(mask & (mask >> n) & _low(n))


def icbrt(x: int) -> int:
    """Largest d with d**3 <= x."""
    d = int(round(x ** (1 / 3))) if x < 1 << 900 else 1 << (x.bit_length() // 3)
    while d ** 3 > x:
        d -= 1
    while (d + 1) ** 3 <= x:
        d += 1
    return d


def restricted_bound(m: int) -> int:
    return 1 << (3 * m)


def general_bound(m: int) -> int:
    """floor(2^(10m/3))."""
    return icbrt(1 << (10 * m))


def counting_gap(m: int) -> int:
    return 12 ** m - 8 ** m


def gap_exceeds_threshold(m: int) -> bool:
    """12^m - 2^(3m) > 2^(7m/2), decided on squares."""
    return counting_gap(m) ** 2 > 1 << (7 * m)


def min_neat_cover_size(m: int) -> int:
    """Smallest l with l * 2^(10m/3) >= 12^m - 2^(3m)."""
    gap = counting_gap(m)
    lo = 1
    while lo ** 3 * (1 << (10 * m)) < gap ** 3:
        lo += 1
    return lo


# -- interval family and labels ------------------------------------------------

@dataclass(frozen=True)
class IntervalFamily:
    """Blocks of four on an ambient universe of size 2 * ambient_n.

    With ambient_n = 4t + a (a in 1..3) the last a indices of X and of Y are
    spare and belong to no interval.
    """

    ambient_n: int

    @property
    def n(self) -> int:
        return self.ambient_n - self.ambient_n % 4

    @property
    def m(self) -> int:
        return self.n // 4

    @cached_property
    def intervals(self) -> tuple:
        na = self.ambient_n
        xs = [interval_mask(4 * i + 1, 4 * i + 4) for i in range(self.m)]
        ys = [interval_mask(na + 4 * i + 1, na + 4 * i + 4) for i in range(self.m)]
        return tuple(xs + ys)

    @cached_property
    def spare(self) -> int:
        na, n = self.ambient_n, self.n
        return interval_mask(n + 1, na) | interval_mask(na + n + 1, 2 * na)


def interval_family(n: int) -> IntervalFamily:
    return IntervalFamily(n)


@dataclass(frozen=True)
class ABLabels:
    family: IntervalFamily
    members: tuple
    A: frozenset
    B: frozenset

    @property
    def n(self):
        return self.family.n

    @cached_property
    def sign(self) -> dict:
        out = dict.fromkeys(self.A, 1)
        out.update(dict.fromkeys(self.B, -1))
        return out

    def per_interval(self, k: int) -> list:
        """𝓛_k: the singletons of interval I_k (1-based k)."""
        block = self.family.intervals[k - 1]
        return [1 << b for b in range(block.bit_length()) if block >> b & 1]


def one_per_interval(intervals) -> list:
    choices = [[1 << b for b in range(iv.bit_length()) if iv >> b & 1] for iv in intervals]
    out = []
    for combo in itertools.product(*choices):
        mask = 0
        for bit in combo:
            mask |= bit
        out.append(mask)
    return sorted(out)


def build_ab(n: int, cap: int = AB_CAP):
    if n % 4:
        raise NotDivisibleBy4(f"n={n} is not divisible by 4")
    if n > cap:
        raise CapExceeded("build_ab n", cap, n)
    fam = IntervalFamily(n)
    members = tuple(one_per_interval(fam.intervals))
    assert len(members) == 1 << (4 * fam.m)
    A = frozenset(x for x in members if matched_pairs(x, n) % 2)
    B = frozenset(members) - A
    return fam, ABLabels(fam, members, A, B)


@dataclass
class CountingReport:
    n: int
    m: int
    family_size: int
    a_count: int
    b_count: int
    b_outside_ln: int
    b_inside_ln: int
    a_inside_ln: int
    a_subset_ln: bool
    gap: int
    threshold_holds: bool

    @property
    def checks(self) -> dict:
        m = self.m
        return {
            "family_size == 2^(4m)": self.family_size == 1 << (4 * m),
            "|B \\ L_n| == 12^m": self.b_outside_ln == 12 ** m,
            "|B| - |A| == 2^(3m)": self.b_count - self.a_count == 1 << (3 * m),
            "gap == 12^m - 2^(3m)": self.gap == counting_gap(m),
            "A subset of L_n": self.a_subset_ln,
            "|B & L_n| == |B| - 12^m": self.b_inside_ln == self.b_count - 12 ** m,
            # The strict inequality only kicks in from m = 4 on.
            "gap > 2^(7m/2) iff m >= 4": self.threshold_holds == (m >= 4),
        }

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_counting_lemma(n: int, cap: int = AB_CAP) -> CountingReport:
    fam, ab = build_ab(n, cap)
    a_in = sum(1 for x in ab.A if has_matching_pair((x, n)))
    b_in = sum(1 for x in ab.B if has_matching_pair((x, n)))
    return CountingReport(
        n=n, m=fam.m,
        family_size=len(ab.members),
        a_count=len(ab.A), b_count=len(ab.B),
        b_outside_ln=len(ab.B) - b_in, b_inside_ln=b_in,
        a_inside_ln=a_in, a_subset_ln=a_in == len(ab.A),
        gap=a_in - b_in,
        threshold_holds=gap_exceeds_threshold(fam.m),
    )


# -- discrepancy ---------------------------------------------------------------

def signed_count(r: SetRectangle, ab: ABLabels) -> int:
    """|R & A| - |R & B|."""
    p = r.partition
    if len(r) <= len(ab.members):
        sign = ab.sign
        return sum(sign.get(u | v, 0) for u in r.S for v in r.T)
    S, T = r.S, r.T
    total = 0
    for x in ab.members:
        if (x & p.pi0) in S and (x & p.pi1) in T:
            total += ab.sign[x]
    return total


def discrepancy(r: SetRectangle, ab: ABLabels) -> int:
    return abs(signed_count(r, ab))


def _signed_over(P, Q, p_part, intervals, n):
    """Signed count of one-per-interval sets U with U & p_part in P and the rest in Q."""
    total = 0
    for x in one_per_interval(intervals):
        if (x & p_part) in P and (x & ~p_part) in Q:
            total += 1 if matched_pairs(x, n) % 2 else -1
    return total


# -- partitions ----------------------------------------------------------------

def ordered_partitions(n: int) -> list:
    """Every ordered partition with non-empty parts, one per distinct Pi_0."""
    seen = set()
    out = []
    for i in range(1, 2 * n + 1):
        for j in range(i, 2 * n + 1):
            for side in (0, 1):
                p = OrderedPartition(n, i, j, side)
                if p.pi0 == 0 or p.pi1 == 0 or p.pi0 in seen:
                    continue
                seen.add(p.pi0)
                out.append(p)
    return out


def is_neat(p: OrderedPartition, f: IntervalFamily) -> bool:
    return all((iv & p.pi0) in (0, iv) for iv in f.intervals)


def neat_balanced_partitions(n: int) -> list:
    f = IntervalFamily(n)
    return [p for p in ordered_partitions(n) if p.is_balanced() and is_neat(p, f)]


def _small_side(p: OrderedPartition) -> int:
    s0, s1 = p.sizes()
    return 0 if s0 <= s1 else 1


@dataclass(frozen=True)
class GoodIndexSet:
    partition: OrderedPartition
    small_side: int
    good: frozenset
    v_good: int
    i_good: tuple
    pi1_good: int
    pi1_bad: int

    @property
    def small(self) -> int:
        p = self.partition
        return p.pi0 if self.small_side == 0 else p.pi1

    def lemma_holds(self) -> bool:
        """Small side inside V_G and of size |G|."""
        return self.small & ~self.v_good == 0 and popcount(self.small) == len(self.good)


def good_indices(p: OrderedPartition, f: IntervalFamily = None, side: int = None) -> GoodIndexSet:
    n = p.n
    f = f or IntervalFamily(n)
    side = _small_side(p) if side is None else side
    good = frozenset(i for i in range(1, n + 1)
                     if (p.pi0 >> (i - 1) & 1) != (p.pi0 >> (n + i - 1) & 1))
    v_good = 0
    for i in good:
        v_good |= 1 << (i - 1) | 1 << (n + i - 1)
    i_good = tuple(k + 1 for k, iv in enumerate(f.intervals) if iv & ~v_good == 0)
    large = p.pi1 if side == 0 else p.pi0
    return GoodIndexSet(p, side, good, v_good, i_good, large & v_good, large & ~v_good)


def lemma47_holds(p: OrderedPartition) -> bool:
    """Checks every admissible choice of the smaller side (both on ties)."""
    s0, s1 = p.sizes()
    sides = [s for s, ok in ((0, s0 <= s1), (1, s1 <= s0)) if ok]
    return all(good_indices(p, side=s).lemma_holds() for s in sides)


# -- neat splitting ------------------------------------------------------------

def _repartition(r: SetRectangle, q: OrderedPartition, split: int) -> list:
    """Split R on its trace over ``split`` and re-express each part over q.

    ``split`` must contain every element that changes sides.
    """
    p = r.partition
    moved_in = q.pi0 & p.pi1
    moved_out = p.pi0 & q.pi1
    assert (moved_in | moved_out) & ~split == 0
    by_s, by_t = {}, {}
    for u in r.S:
        by_s.setdefault(u & split, []).append(u)
    for v in r.T:
        by_t.setdefault(v & split, []).append(v)
    out = []
    for a_s in sorted(by_s):
        for a_t in sorted(by_t):
            S = frozenset((u & ~moved_out) | (a_t & moved_in) for u in by_s[a_s])
            T = frozenset((v & ~moved_in) | (a_s & moved_out) for v in by_t[a_t])
            out.append(SetRectangle(q, S, T))
    return out


def neat_target(p: OrderedPartition, f: IntervalFamily):
    """The neat partition used by make_neat and the straddling intervals.

    Straddling intervals go into the smaller side first; other assignments
    are tried, in order, only if that loses balance.
    """
    small = _small_side(p)
    straddlers = [iv for iv in f.intervals if (iv & p.pi0) not in (0, iv)]
    if not straddlers:
        return p, ()
    for choice in itertools.product((small, 1 - small), repeat=len(straddlers)):
        pi0 = p.pi0
        for iv, side in zip(straddlers, choice):
            pi0 = pi0 | iv if side == 0 else pi0 & ~iv
        q = OrderedPartition.from_mask(p.n, pi0)
        if q is not None and q.pi1 and q.is_balanced() and is_neat(q, f):
            return q, tuple(straddlers)
    raise UnbalanceableAtThisN(
        f"no neat balanced partition reachable from [{p.i}, {p.j}] at n={p.n}")


def make_neat(r: SetRectangle, f: IntervalFamily = None) -> list:
    """Disjoint rectangles on one neat balanced partition whose union is R."""
    f = f or IntervalFamily(r.n)
    q, straddlers = neat_target(r.partition, f)
    if not straddlers:
        return [r]
    split = 0
    for iv in straddlers:
        split |= iv
    return _repartition(r, q, split)


# -- sampling ------------------------------------------------------------------

def submasks(mask: int) -> list:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return sorted(out)


def _candidates(p: OrderedPartition, ab: ABLabels, restricted: bool):
    if restricted:
        return (sorted({x & p.pi0 for x in ab.members}),
                sorted({x & p.pi1 for x in ab.members}))
    return submasks(p.pi0), submasks(p.pi1)


def sample_rectangle(p: OrderedPartition, ab: ABLabels, rng, restricted: bool) -> SetRectangle:
    """Keep each admissible trace independently with probability 1/2."""
    cs, ct = _candidates(p, ab, restricted)
    keep_s = rng.random(len(cs)) < 0.5
    keep_t = rng.random(len(ct)) < 0.5
    S = frozenset(c for c, k in zip(cs, keep_s) if k)
    T = frozenset(c for c, k in zip(ct, keep_t) if k)
    return SetRectangle(p, S, T)


def _rng(seed, stream, index):
    return np.random.default_rng([seed, stream, index])


@dataclass
class BoundReport:
    n: int
    m: int
    bound: int
    samples: int
    seed: int
    max_discrepancy: int = 0
    violations: list = field(default_factory=list)
    by_mode: dict = field(default_factory=dict)
    decomposition_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.decomposition_failures

    @property
    def aligned_violations(self) -> list:
        """Violations on partitions whose interval starts right after a block."""
        return [v for v in self.violations if (v[1] - 1) % 4 == 0]


def _record(report, key, r, d):
    report.max_discrepancy = max(report.max_discrepancy, d)
    report.by_mode[key] = max(report.by_mode.get(key, 0), d)
    if d > report.bound:
        report.violations.append((key, r.partition.i, r.partition.j, r.partition.side, d))


def check_restricted_bound(n: int, samples: int, seed: int, ab: ABLabels = None) -> BoundReport:
    """Seeded rectangles on [1, n] and on [i, i+n-1]; all must stay within 2^(3m).

    ``samples`` rectangles are drawn for each of the two partition families,
    alternating unrestricted and 𝓛-restricted traces.
    """
    if ab is None:
        _, ab = build_ab(n, cap=max(n, AB_CAP))
    m = n // 4
    report = BoundReport(n, m, restricted_bound(m), samples, seed)
    base = OrderedPartition(n, 1, n, 0)
    shifted = [OrderedPartition(n, i, i + n - 1, 0) for i in range(1, n + 2)]
    for k in range(samples):
        restricted = bool(k % 2)
        mode = "restricted" if restricted else "unrestricted"
        rng = _rng(seed, 0, k)
        r = sample_rectangle(base, ab, rng, restricted)
        _record(report, f"[1,n]/{mode}", r, discrepancy(r, ab))
        rng = _rng(seed, 1, k)
        p = shifted[int(rng.integers(len(shifted)))]
        r = sample_rectangle(p, ab, rng, restricted)
        _record(report, f"[i,i+n-1]/{mode}", r, discrepancy(r, ab))
    return report


def exact_max_discrepancy(p: OrderedPartition, ab: ABLabels, cap: int = 16):
    """Largest discrepancy of any rectangle on p, with a witness (S, T).

    Only 𝓛-traces matter, so S runs over subsets of the Pi_0 traces and the
    best T for a fixed S keeps every Pi_1 trace of one sign.
    """
    cs, ct = _candidates(p, ab, True)
    if len(cs) > cap:
        raise CapExceeded("exact_max_discrepancy traces", cap, len(cs))
    sign = ab.sign
    matrix = np.array([[sign.get(u | v, 0) for v in ct] for u in cs], dtype=np.int64)
    best = (0, frozenset(), frozenset())
    for bits in range(1, 1 << len(cs)):
        rows = [a for a in range(len(cs)) if bits >> a & 1]
        col = matrix[rows].sum(axis=0)
        for value, keep in ((col[col > 0].sum(), col > 0), (-col[col < 0].sum(), col < 0)):
            if value > best[0]:
                best = (int(value), frozenset(cs[a] for a in rows),
                        frozenset(c for c, k in zip(ct, keep) if k))
    return best


def alpha_decomposition(r: SetRectangle, ab: ABLabels):
    """Split R over the traces alpha on the bad part of the larger side.

    Returns ``(terms, exact)`` where ``terms`` maps each 𝓛-compatible alpha to
    the signed count of R^alpha on the good indices, and ``exact`` tells
    whether the signed terms add back up to |R & A| - |R & B|.
    """
    p = r.partition
    n = p.n
    gi = good_indices(p, ab.family)
    small_part = gi.small
    P, Q = (r.S, r.T) if gi.small_side == 0 else (r.T, r.S)
    f = ab.family
    bad_intervals = [iv for iv in f.intervals if iv & ~gi.pi1_bad == 0]
    good_intervals = [iv for iv in f.intervals if iv & ~gi.v_good == 0]
    by_alpha = {}
    for v in Q:
        by_alpha.setdefault(v & gi.pi1_bad, set()).add(v & ~gi.pi1_bad)
    terms = {}
    total = 0
    for alpha in sorted(by_alpha):
        if any(popcount(alpha & iv) != 1 for iv in bad_intervals):
            continue
        term = _signed_over(P, by_alpha[alpha], small_part, good_intervals, n)
        terms[alpha] = term
        total += -term if matched_pairs(alpha, n) % 2 else term
    return terms, total == signed_count(r, ab)


def check_general_bound(n: int, samples: int, seed: int, ab: ABLabels = None) -> BoundReport:
    """Seeded rectangles on neat balanced partitions; bound floor(2^(10m/3))."""
    if ab is None:
        _, ab = build_ab(n, cap=max(n, AB_CAP))
    m = n // 4
    report = BoundReport(n, m, general_bound(m), samples, seed)
    parts = neat_balanced_partitions(n)
    for k in range(samples):
        restricted = bool(k % 2)
        mode = "restricted" if restricted else "unrestricted"
        rng = _rng(seed, 2, k)
        p = parts[int(rng.integers(len(parts)))]
        r = sample_rectangle(p, ab, rng, restricted)
        d = discrepancy(r, ab)
        _record(report, f"neat/{mode}", r, d)
        terms, exact = alpha_decomposition(r, ab)
        gi = good_indices(p, ab.family)
        term_cap = 1 << (3 * len(gi.good) // 4)
        if (not exact or d > sum(abs(t) for t in terms.values())
                or any(abs(t) > term_cap for t in terms.values())
                or len(terms) > 1 << (n - len(gi.good))):
            report.decomposition_failures.append((k, p.i, p.j, p.side))
    return report


# -- covers --------------------------------------------------------------------

def ln_size(n: int) -> int:
    return int(len(ln_mask_members(n)))


def _ln_masks(n: int) -> set:
    # ln_mask_members uses letter bits (MSB first, a = 0); convert to set masks.
    width = 2 * n
    full = (1 << width) - 1
    out = set()
    for v in ln_mask_members(n).tolist():
        a_bits = ~v & full
        mask = 0
        for k in range(width):
            if a_bits >> (width - 1 - k) & 1:
                mask |= 1 << k
        out.add(mask)
    return out


def check_disjoint_cover(rects, n: int) -> None:
    """Raise NotACover / NotDisjoint unless ``rects`` partition L_n."""
    seen = {}
    for idx, r in enumerate(rects):
        for x in r.members:
            if not has_matching_pair((x, n)):
                raise NotACover(f"rectangle {idx} contains a set outside L_{n}", extra=[x])
            if x in seen:
                raise NotDisjoint(f"rectangles {seen[x]} and {idx} overlap",
                                  pair=(seen[x], idx), witness=x)
            seen[x] = idx
    if len(seen) != ln_size(n):
        missing = sorted(_ln_masks(n) - set(seen))
        raise NotACover(f"{len(missing)} sets of L_{n} are uncovered", missing=missing[:10])


class ReducedCover(NamedTuple):
    rectangles: list
    n: int
    pieces: list  # output rectangles per input rectangle


def _compress(mask: int, n: int, n4: int) -> int:
    return (mask & _low(n4)) | ((mask >> n) & _low(n4)) << n4


def restrict_to_multiple_of_four(rects, n: int, verify: bool = True) -> ReducedCover:
    """Drop sets that use spare elements and rebalance into a cover of L_{4t}."""
    if verify:
        check_disjoint_cover(rects, n)
    n4 = n - n % 4
    if n4 == n:
        return ReducedCover(list(rects), n, [1] * len(rects))
    if n4 == 0:
        raise NotDivisibleBy4(f"n={n} has no non-empty multiple-of-four core")
    spare = IntervalFamily(n).spare
    targets = [q for q in ordered_partitions(n4) if q.is_balanced()]
    out, pieces = [], []
    for r in rects:
        S = frozenset(_compress(u, n, n4) for u in r.S if not u & spare)
        T = frozenset(_compress(v, n, n4) for v in r.T if not v & spare)
        if not S or not T:
            pieces.append(0)
            continue
        pi0 = _compress(r.partition.pi0 & ~spare, n, n4)
        q = min(targets, key=lambda c: popcount(c.pi0 ^ pi0))
        moved = q.pi0 ^ pi0
        # A stand-in partition carries the shrunken Pi_0 (it need not be ordered).
        shrunk = _MaskPartition(n4, pi0)
        parts = _repartition(_LooseRect(shrunk, S, T), q, moved)
        parts = [x for x in parts if x.S and x.T]
        out.extend(parts)
        pieces.append(len(parts))
    return ReducedCover(out, n4, pieces)


@dataclass(frozen=True)
class _MaskPartition:
    n: int
    pi0: int

    @property
    def pi1(self):
        return _low(2 * self.n) & ~self.pi0


@dataclass(frozen=True)
class _LooseRect:
    partition: _MaskPartition
    S: frozenset
    T: frozenset


@dataclass
class LowerBoundReport:
    n: int
    m: int
    ell: int
    telescoping_sum: int
    expected_gap: int
    neat_total: int = None
    max_inflation: int = None
    neat_error: str = None
    max_neat_discrepancy: int = None
    general_bound: int = None
    implied_min_neat: int = None
    implied_min_cover: int = None
    all_balanced: bool = True

    @property
    def checks(self) -> dict:
        out = {
            "all rectangles balanced": self.all_balanced,
            "telescoping sum == 12^m - 2^(3m)": self.telescoping_sum == self.expected_gap,
            "cover size >= implied minimum": self.ell >= self.implied_min_cover,
        }
        if self.neat_error is None:
            out["neat pieces <= 256 per rectangle"] = self.max_inflation <= 256
            out["neat pieces within floor(2^(10m/3))"] = (
                self.max_neat_discrepancy <= self.general_bound)
            out["neat cover size >= implied minimum"] = self.neat_total >= self.implied_min_neat
        return out

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def cover_lower_bound(rects, n: int, ab: ABLabels = None) -> LowerBoundReport:
    if n % 4:
        raise NotDivisibleBy4(f"n={n} is not divisible by 4")
    check_disjoint_cover(rects, n)
    if ab is None:
        _, ab = build_ab(n, cap=max(n, AB_CAP))
    m = n // 4
    report = LowerBoundReport(
        n=n, m=m, ell=len(rects),
        telescoping_sum=sum(signed_count(r, ab) for r in rects),
        expected_gap=counting_gap(m),
        general_bound=general_bound(m),
        implied_min_neat=min_neat_cover_size(m),
        all_balanced=all(r.partition.is_balanced() for r in rects),
    )
    report.implied_min_cover = -(-report.implied_min_neat // 256)
    try:
        pieces = [make_neat(r, ab.family) for r in rects]
    except UnbalanceableAtThisN as exc:
        report.neat_error = str(exc)
        return report
    report.neat_total = sum(len(p) for p in pieces)
    report.max_inflation = max((len(p) for p in pieces), default=0)
    report.max_neat_discrepancy = max(
        (discrepancy(x, ab) for p in pieces for x in p), default=0)
    return report


def row_cover(n: int) -> list:
    """Disjoint cover of L_n by [1, n]-rectangles {U} x {V : V meets U}."""
    part = OrderedPartition(n, 1, n, 0)
    out = []
    for u in range(1, 1 << n):
        T = frozenset(v << n for v in range(1 << n) if v & u)
        out.append(SetRectangle(part, {u}, T))
    return out


@dataclass
class NeatReport:
    n: int
    samples: int
    seed: int
    max_pieces: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def neat_split_problems(r: SetRectangle, pieces: list, f: IntervalFamily) -> list:
    problems = []
    if len(pieces) > 256:
        problems.append(f"{len(pieces)} pieces")
    if len({x.partition.pi0 for x in pieces}) > 1:
        problems.append("pieces use different partitions")
    if any(not is_neat(x.partition, f) or not x.partition.is_balanced() for x in pieces):
        problems.append("piece partition not neat and balanced")
    union = set()
    total = 0
    for x in pieces:
        union |= x.members
        total += len(x)
    if total != len(union):
        problems.append("pieces overlap")
    if union != set(r.members):
        problems.append("union differs from the input rectangle")
    return problems


def check_make_neat(n: int, samples: int, seed: int, ab: ABLabels = None) -> NeatReport:
    """make_neat on seeded rectangles over balanced partitions that are not neat."""
    if ab is None:
        _, ab = build_ab(n, cap=max(n, AB_CAP))
    f = ab.family
    parts = [p for p in ordered_partitions(n) if p.is_balanced() and not is_neat(p, f)]
    report = NeatReport(n, samples, seed)
    for k in range(samples):
        rng = _rng(seed, 3, k)
        p = parts[int(rng.integers(len(parts)))]
        r = sample_rectangle(p, ab, rng, restricted=True)
        try:
            pieces = make_neat(r, f)
        except UnbalanceableAtThisN as exc:
            report.failures.append((k, p.i, p.j, p.side, str(exc)))
            continue
        report.max_pieces = max(report.max_pieces, len(pieces))
        problems = neat_split_problems(r, pieces, f)
        if problems:
            report.failures.append((k, p.i, p.j, p.side, "; ".join(problems)))
    return report
