"""Zero-sum-free sequences, relative Davenport constants and conjecture checkers.

The search engine enumerates zero-sum-free sequences level by level.  A
sequence's future only depends on its set of nonempty subsums and on its
total, so sequences are merged by that pair; for every group element s the
engine records the greatest length of a zero-sum-free sequence with total s.
Then d_S(G) is the maximum of those lengths over s in S.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .cache import DavenportCache
from .errors import GroupTooLargeError, InvalidArgumentError, InvariantViolation
from .groups import (
    Element,
    FabGroup,
    Subgroup,
    Subset,
    all_subgroups,
    canonical_subset,
    coset_of,
    cosets,
    groups_of_order,
    preimage,
    quotient,
    subgroup_generated,
)

MAX_GROUP_ORDER = 255


def has_zero_sum_subsequence(G: FabGroup, seq: Iterable[Element]) -> bool:
    """True iff some nonempty sub-multiset of `seq` sums to zero."""
    zero = G.zero
    reach: set[Element] = set()
    for g in seq:
        g = G.check(tuple(g))
        if g == zero or G.neg(g) in reach:
            return True
        reach |= {G.add(x, g) for x in reach}
        reach.add(g)
    return False


@dataclass(frozen=True)
class SearchTable:
    """Longest zero-sum-free sequence per total.

    lengths[i] is d_{{g}}(G) for g = G.elements[i]; witnesses[i] is the
    lexicographically least such sequence (element indices, non-decreasing),
    or None when the length is 0.
    """

    group: FabGroup
    lengths: tuple[int, ...]
    witnesses: tuple[tuple[int, ...] | None, ...]


def _shifters(G: FabGroup):
    """Per element, the bit operations translating a subset mask by that element."""
    n = G.order
    full = (1 << n) - 1
    per_coord = []
    for i, (f, s) in enumerate(zip(G.invariant_factors, G.strides)):
        lows = []
        for gi in range(f):
            low = 0
            for j, x in enumerate(G.elements):
                if x[i] < gi:
                    low |= 1 << j
            lows.append(low)
        per_coord.append((f, s, lows))
    out = []
    for g in G.elements:
        ops = []
        for gi, (f, s, lows) in zip(g, per_coord):
            if gi:
                ops.append((gi * s, (f - gi) * s, full ^ lows[gi], lows[gi]))
        out.append(tuple(ops))
    return out


def _check_size(G: FabGroup, max_order: int | None):
    limit = MAX_GROUP_ORDER if max_order is None else max_order
    if G.order > limit:
        raise GroupTooLargeError(G.order, limit)


def zero_sum_free_table(G: FabGroup, max_order: int | None = None) -> SearchTable:
    _check_size(G, max_order)
    return _table(G)


@lru_cache(maxsize=256)
def _table(G: FabGroup) -> SearchTable:
    n = G.order
    add = G.add_table
    neg = G.neg_table
    shifts = _shifters(G)

    lengths = [0] * n
    witnesses: list[tuple[int, ...] | None] = [None] * n
    level: dict[tuple[int, int], tuple[int, ...]] = {(0, 0): ()}
    k = 0
    while level:
        k += 1
        nxt: dict[tuple[int, int], tuple[int, ...]] = {}
        for (mask, total), wit in level.items():
            for g in range(1, n):
                if mask >> neg[g] & 1:
                    continue
                moved = mask
                for left, right, high, low in shifts[g]:
                    moved = ((moved << left) & high) | ((moved >> right) & low)
                key = (mask | moved | (1 << g), add[total][g])
                w = list(wit)
                bisect.insort(w, g)
                cand = tuple(w)
                old = nxt.get(key)
                if old is None or cand < old:
                    nxt[key] = cand
        for (_, total), wit in nxt.items():
            if lengths[total] < k or (lengths[total] == k and wit < witnesses[total]):
                lengths[total] = k
                witnesses[total] = wit
        level = nxt
    return SearchTable(G, tuple(lengths), tuple(witnesses))


@dataclass(frozen=True)
class SrdResult:
    """d_S(G) with a longest zero-sum-free S-sum sequence as witness."""

    group: FabGroup
    subset: Subset
    value: int
    witness: tuple[Element, ...] | None = field(default=None)

    def __post_init__(self):
        G = self.group
        if self.value < 0:
            raise InvariantViolation("negative d-value")
        if (self.witness is None) != (self.value == 0):
            raise InvariantViolation("witness must be present exactly when the value is positive")
        if self.witness is not None:
            if len(self.witness) != self.value:
                raise InvariantViolation("witness length differs from the value")
            if G.sum(self.witness) not in set(self.subset):
                raise InvariantViolation("witness total is not in S")
            if has_zero_sum_subsequence(G, self.witness):
                raise InvariantViolation("witness has a zero-sum subsequence")

    @property
    def rel_davenport(self) -> int:
        return self.value + 1


def _nonempty_subset(G: FabGroup, S) -> Subset:
    sub = canonical_subset(G, S)
    if not sub:
        raise InvalidArgumentError("S must be a nonempty subset of G")
    return sub


def small_rel_davenport(
    G: FabGroup, S: Iterable[Element], *, cache: DavenportCache | None = None, max_order: int | None = None
) -> SrdResult:
    """d_S(G): the longest S-sum sequence without a nonempty zero-sum subsequence.

    Among all maximal witnesses the lexicographically least is returned.
    """
    sub = _nonempty_subset(G, S)
    if cache is not None:
        rec = cache.get(G.invariant_factors, sub)
        if rec is not None:
            value, wit = rec
            try:
                return SrdResult(G, sub, value, None if wit is None else tuple(tuple(x) for x in wit))
            except (InvariantViolation, TypeError, ValueError):
                cache.discard(G.invariant_factors, sub)
    table = zero_sum_free_table(G, max_order)
    best, wit = 0, None
    for s in sub:
        i = G.index(s)
        length, w = table.lengths[i], table.witnesses[i]
        if length > best or (length == best and w is not None and wit is not None and w < wit):
            best, wit = length, w
    witness = None if wit is None else tuple(G.elements[i] for i in wit)
    result = SrdResult(G, sub, best, witness)
    if cache is not None:
        cache.put(G.invariant_factors, sub, best, witness)
    return result


def rel_davenport(G: FabGroup, S: Iterable[Element], **kw) -> int:
    """D_S(G), the least n forcing every S-sum sequence of length n to contain a zero-sum."""
    return small_rel_davenport(G, S, **kw).value + 1


def davenport(G: FabGroup, **kw) -> int:
    return rel_davenport(G, G.elements, **kw)


def cyclic_small_rel_coset(n: int, m: int, g: int) -> int:
    """Closed form for d over the coset g + <m> in Z_n."""
    if n < 1 or m < 1 or n % m:
        raise InvalidArgumentError(f"need m | n, got n={n}, m={m}")
    g %= m
    if g == 0:
        g = m
    return n - math.gcd(g, m)


def skalba_relative(n: int, a: int) -> int:
    """Relative Davenport constant D_a(Z_n) for a single element a."""
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    a %= n
    if a == 0:
        return n
    return n - math.gcd(a, n)


@dataclass
class ConjectureReport:
    conjecture: str
    group: FabGroup
    cases_checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "conjecture": self.conjecture,
            "group": self.group.spec(),
            "cases_checked": self.cases_checked,
            "violations": self.violations,
        }


def _wit(res: SrdResult):
    return None if res.witness is None else [list(x) for x in res.witness]


def check_conjecture_generator(G: FabGroup, H: Subgroup, **kw) -> ConjectureReport:
    """For cosets alpha, beta of H with beta in <alpha>, test d_alpha(G) >= d_beta(G)."""
    report = ConjectureReport("generator", G)
    Q, pi = quotient(G, H)
    d_of = {}
    for q in Q.elements:
        d_of[q] = small_rel_davenport(G, preimage(pi, [q]), **kw)
    for alpha in Q.elements:
        for beta in subgroup_generated(Q, [alpha]).elements:
            report.cases_checked += 1
            da, db = d_of[alpha], d_of[beta]
            if da.value < db.value:
                report.violations.append(
                    {
                        "subgroup": [list(x) for x in H.elements],
                        "alpha": list(preimage(pi, [alpha])[0]),
                        "beta": list(preimage(pi, [beta])[0]),
                        "d_alpha": da.value,
                        "d_beta": db.value,
                        "witness_beta": _wit(db),
                    }
                )
    return report


def check_conjecture_generator_all(G: FabGroup, **kw) -> ConjectureReport:
    """The generator conjecture over every subgroup H of G."""
    total = ConjectureReport("generator", G)
    for H in all_subgroups(G):
        r = check_conjecture_generator(G, H, **kw)
        total.cases_checked += r.cases_checked
        total.violations.extend(r.violations)
    return total


def check_conjecture_subgroup_difference(G: FabGroup, **kw) -> ConjectureReport:
    """For H1 < H2 and alpha = g+H1 inside beta = g+H2, test d_beta(G) = d_{beta minus alpha}(G)."""
    report = ConjectureReport("subgroup_difference", G)
    subs = all_subgroups(G)
    for H1 in subs:
        for H2 in subs:
            if len(H2) <= len(H1) or not all(h in H2 for h in H1.elements):
                continue
            for alpha in cosets(G, H1):
                beta = coset_of(G, alpha[0], H2)
                diff = tuple(x for x in beta if x not in set(alpha))
                report.cases_checked += 1
                db = small_rel_davenport(G, beta, **kw)
                dd = small_rel_davenport(G, diff, **kw)
                if db.value != dd.value:
                    report.violations.append(
                        {
                            "H1": [list(x) for x in H1.elements],
                            "H2": [list(x) for x in H2.elements],
                            "g": list(alpha[0]),
                            "d_beta": db.value,
                            "d_beta_minus_alpha": dd.value,
                            "witness_beta": _wit(db),
                        }
                    )
    return report


def _sweep_one(factors: tuple[int, ...], max_order: int | None, known: dict) -> tuple[list[dict], dict, tuple[int, int]]:
    G = FabGroup(factors)
    cache = DavenportCache(None)
    cache.records.update(known)
    gen = check_conjecture_generator_all(G, cache=cache, max_order=max_order)
    dif = check_conjecture_subgroup_difference(G, cache=cache, max_order=max_order)
    fresh = {k: v for k, v in cache.records.items() if k not in known}
    return [gen.to_json(), dif.to_json()], fresh, (cache.hits, cache.misses)


def sweep_conjectures(
    groups: Sequence[FabGroup], *, jobs: int = 1, cache: DavenportCache | None = None, max_order: int | None = None
) -> list[tuple[ConjectureReport, ConjectureReport]]:
    """Run both checkers on every group; output order follows `groups` for any `jobs`."""
    for G in groups:
        _check_size(G, max_order)

    known = [cache.records_for(G.invariant_factors) if cache is not None else {} for G in groups]
    args = [(G.invariant_factors, max_order, k) for G, k in zip(groups, known)]
    if jobs > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(_sweep_one, *zip(*args)))
    else:
        outs = [_sweep_one(*a) for a in args]

    results = []
    for reports, records, (hits, misses) in outs:
        if cache is not None:
            cache.hits += hits
            cache.misses += misses
            cache.merge(records)
        gen, dif = (_report_from_json(r) for r in reports)
        results.append((gen, dif))
    return results


def _report_from_json(d: dict) -> ConjectureReport:
    return ConjectureReport(
        d["conjecture"], FabGroup(tuple(d["group"]["invariant_factors"])), d["cases_checked"], d["violations"]
    )


def groups_up_to(max_order: int) -> list[FabGroup]:
    """All finite abelian groups of order <= max_order, one per isomorphism class."""
    return [G for n in range(1, max_order + 1) for G in groups_of_order(n)]
