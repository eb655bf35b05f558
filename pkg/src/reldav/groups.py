"""Finite abelian groups in invariant-factor form.

Elements are tuples of residues, one per invariant factor.  Subsets are
canonical sorted tuples of elements so that equal subsets compare and hash
equal.  Every group operation here works on the explicit element table; the
groups this package cares about have at most a few hundred elements.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from sympy import factorint
from sympy.utilities.iterables import partitions

from .errors import DomainError, InvalidArgumentError, InvalidGroupError, InvalidSubgroupError

Element = tuple[int, ...]
Subset = tuple[Element, ...]


@dataclass(frozen=True)
class FabGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = self.invariant_factors
        if any(f < 2 for f in fs):
            raise InvalidGroupError(f"invariant factors must be >= 2, got {list(fs)}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise InvalidGroupError(f"{list(fs)} is not a divisibility chain; use make_group")

    def __repr__(self):
        if not self.invariant_factors:
            return "FabGroup(trivial)"
        return "FabGroup(" + "+".join(f"Z{f}" for f in self.invariant_factors) + ")"

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for f in reversed(self.invariant_factors):
            out.append(s)
            s *= f
        return tuple(reversed(out))

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements in lexicographic order; position equals `index`."""
        return tuple(itertools.product(*(range(f) for f in self.invariant_factors)))

    def index(self, x: Element) -> int:
        return sum(c * s for c, s in zip(x, self.strides))

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.rank
            and all(isinstance(c, int) and 0 <= c < f for c, f in zip(x, self.invariant_factors))
        )

    def check(self, x) -> Element:
        if not self.contains(x):
            raise DomainError(f"{x!r} is not an element of {self!r}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % f for a, b, f in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % f for a, f in zip(x, self.invariant_factors))

    def mul(self, k: int, x: Element) -> Element:
        return tuple(k * a % f for a, f in zip(x, self.invariant_factors))

    def sum(self, xs: Iterable[Element]) -> Element:
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def element_order(self, x: Element) -> int:
        return math.lcm(1, *(f // math.gcd(a, f) for a, f in zip(x, self.invariant_factors)))

    @cached_property
    def add_table(self) -> list[list[int]]:
        """add_table[i][j] is the index of element i + element j."""
        idx = self.index
        els = self.elements
        return [[idx(self.add(x, y)) for y in els] for x in els]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.index(self.neg(x)) for x in self.elements]

    def spec(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors)}


def make_group(factors: Sequence[int]) -> FabGroup:
    """Build a group from any list of cyclic orders, normalizing to invariant factors.

    >>> make_group([6, 2]).invariant_factors
    (2, 6)
    >>> make_group([4, 6]).invariant_factors
    (2, 12)
    """
    factors = list(factors)
    for f in factors:
        if not isinstance(f, int) or isinstance(f, bool) or f <= 1:
            raise InvalidGroupError(f"every factor must be an integer >= 2, got {factors}")
    if all(b % a == 0 for a, b in zip(factors, factors[1:])):
        return FabGroup(tuple(factors))
    # elementary divisors, regrouped into the divisibility chain
    powers: dict[int, list[int]] = defaultdict(list)
    for f in factors:
        for p, e in factorint(f).items():
            powers[p].append(p**e)
    length = max(len(v) for v in powers.values())
    chain = [1] * length
    for p, ps in powers.items():
        ps.sort(reverse=True)
        for i, q in enumerate(ps):
            chain[length - 1 - i] *= q
    return FabGroup(tuple(chain))


def cyclic(n: int) -> FabGroup:
    return make_group([n] if n > 1 else [])


def canonical_subset(G: FabGroup, elems: Iterable) -> Subset:
    out = set()
    for x in elems:
        out.add(G.check(tuple(x)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Subgroup:
    group: FabGroup
    elements: Subset
    gens: tuple[Element, ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._members

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)


def _closure(G: FabGroup, start: Iterable[Element], gens: Sequence[Element]) -> set[Element]:
    members = set(start)
    frontier = list(members)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return members


def subgroup_generated(G: FabGroup, gens: Iterable) -> Subgroup:
    gens = tuple(G.check(tuple(g)) for g in gens)
    members = _closure(G, [G.zero], gens)
    return Subgroup(G, tuple(sorted(members)), gens)


def make_subgroup(G: FabGroup, elems: Iterable) -> Subgroup:
    """Wrap an explicit element set, verifying it is a subgroup."""
    members = canonical_subset(G, elems)
    check_subgroup(G, members)
    return Subgroup(G, members, members)


def check_subgroup(G: FabGroup, members: Sequence[Element]) -> None:
    s = set(members)
    if G.zero not in s:
        raise InvalidSubgroupError("subgroup must contain the identity")
    for x in s:
        for y in s:
            if G.add(x, y) not in s:
                raise InvalidSubgroupError(f"not closed: {x} + {y} leaves the set")


def trivial_subgroup(G: FabGroup) -> Subgroup:
    return Subgroup(G, (G.zero,), ())


def whole_group(G: FabGroup) -> Subgroup:
    return Subgroup(G, G.elements, G.elements)


def all_subgroups(G: FabGroup) -> list[Subgroup]:
    """Every subgroup of G, ordered by size then by element list.

    Built by closing the trivial subgroup under one extra generator at a time;
    every subgroup is reached because it is generated by its own elements.
    """
    seen: dict[frozenset, Subgroup] = {}
    start = trivial_subgroup(G)
    seen[frozenset(start.elements)] = start
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            for x in G.elements:
                if x in H:
                    continue
                members = _closure(G, H.elements, H.gens + (x,)) if H.gens else _closure(G, H.elements, (x,))
                key = frozenset(members)
                if key not in seen:
                    sub = Subgroup(G, tuple(sorted(members)), H.gens + (x,))
                    seen[key] = sub
                    nxt.append(sub)
        frontier = nxt
    return sorted(seen.values(), key=lambda H: (len(H), H.elements))


def cosets(G: FabGroup, H: Subgroup) -> list[Subset]:
    """Partition of G into cosets of H, each sorted, listed by minimal representative."""
    check_subgroup(G, H.elements)
    seen: set[Element] = set()
    out = []
    for x in G.elements:
        if x in seen:
            continue
        c = tuple(sorted(G.add(x, h) for h in H.elements))
        seen.update(c)
        out.append(c)
    return out


def coset_of(G: FabGroup, g: Element, H: Subgroup) -> Subset:
    return tuple(sorted(G.add(g, h) for h in H.elements))


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism determined by the images of the standard generators of `source`."""

    source: FabGroup
    target: FabGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.source.rank:
            raise InvalidArgumentError(f"need {self.source.rank} images, got {len(self.images)}")
        for img, f in zip(self.images, self.source.invariant_factors):
            self.target.check(img)
            if f % self.target.element_order(img):
                raise InvalidArgumentError(f"image {img} has order not dividing {f}")

    def __call__(self, x: Element) -> Element:
        T = self.target
        out = T.zero
        for c, img in zip(x, self.images):
            if c:
                out = T.add(out, T.mul(c, img))
        return out

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner."""
        if inner.target != self.source:
            raise DomainError("composition of incompatible homomorphisms")
        return GroupHom(inner.source, self.target, tuple(self(y) for y in inner.images))

    def kernel(self) -> Subgroup:
        zero = self.target.zero
        return Subgroup(self.source, tuple(x for x in self.source.elements if self(x) == zero))

    def image_set(self) -> Subset:
        return tuple(sorted({self(x) for x in self.source.elements}))

    def is_surjective(self) -> bool:
        return len(self.image_set()) == self.target.order

    def is_homomorphism(self) -> bool:
        """Exhaustive check on all pairs (the image formula makes this true by construction)."""
        S, T = self.source, self.target
        vals = {x: self(x) for x in S.elements}
        return all(vals[S.add(x, y)] == T.add(vals[x], vals[y]) for x in S.elements for y in S.elements)


def identify_structure(n: int, add: Sequence[Sequence[int]], zero: int) -> tuple[FabGroup, list[int]]:
    """Recognize an abelian group given by its Cayley table on labels 0..n-1.

    Returns the group in invariant-factor form and a basis: `basis[i]` is the
    label generating the i-th cyclic factor, so that coords c map to the label
    sum(c_i * basis[i]) bijectively.
    """
    orders = [0] * n
    for x in range(n):
        k, y = 1, x
        while y != zero:
            y = add[y][x]
            k += 1
        orders[x] = k
    chain = [1]
    for p, e_max in factorint(n).items():
        counts = [1]
        k = 1
        while counts[-1] < p**e_max:
            counts.append(sum(1 for o in orders if (p**k) % o == 0))
            k += 1
        # at_least[k-1]: number of cyclic p-factors of exponent >= k
        at_least = [_ilog(counts[k] // counts[k - 1], p) for k in range(1, len(counts))]
        exps = []
        for k, m in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            exps.extend([k] * (m - nxt))
        exps.sort(reverse=True)
        if len(exps) > len(chain):
            chain = [1] * (len(exps) - len(chain)) + chain
        for i, e in enumerate(exps):
            chain[len(chain) - 1 - i] *= p**e
    factors = tuple(f for f in chain if f > 1)
    G = FabGroup(factors)

    targets = list(reversed(factors))
    basis_desc: list[int] = []

    def extend(current: set[int], pos: int) -> bool:
        if pos == len(targets):
            return True
        t = targets[pos]
        for x in range(n):
            if orders[x] != t:
                continue
            span = set(current)
            y = x
            ok = True
            for _ in range(1, t):
                if y in current:
                    ok = False
                    break
                y = add[y][x]
            if not ok:
                continue
            layer = list(current)
            y = x
            for _ in range(1, t):
                span.update(add[c][y] for c in layer)
                y = add[y][x]
            if len(span) != len(current) * t:
                continue
            basis_desc.append(x)
            if extend(span, pos + 1):
                return True
            basis_desc.pop()
        return False

    if not extend({zero}, 0):
        raise InvalidGroupError("Cayley table is not an abelian group")
    return G, list(reversed(basis_desc))


def _ilog(r: int, p: int) -> int:
    e = 0
    while r > 1:
        r //= p
        e += 1
    return e


def label_map(G: FabGroup, basis: Sequence[int], add: Sequence[Sequence[int]], zero: int) -> dict[Element, int]:
    """Coordinates in G -> table label, for a basis found by identify_structure."""
    out = {}
    for c in G.elements:
        lab = zero
        for k, b in zip(c, basis):
            for _ in range(k):
                lab = add[lab][b]
        out[c] = lab
    return out


def quotient(G: FabGroup, H: Subgroup) -> tuple[FabGroup, GroupHom]:
    """G/H in invariant-factor form together with the projection."""
    cs = cosets(G, H)
    which = {}
    for i, c in enumerate(cs):
        for x in c:
            which[x] = i
    m = len(cs)
    reps = [c[0] for c in cs]
    table = [[which[G.add(reps[i], reps[j])] for j in range(m)] for i in range(m)]
    Q, basis = identify_structure(m, table, which[G.zero])
    coords = {lab: c for c, lab in label_map(Q, basis, table, which[G.zero]).items()}
    gens = []
    for i in range(G.rank):
        e = tuple(1 if j == i else 0 for j in range(G.rank))
        gens.append(coords[which[e]])
    return Q, GroupHom(G, Q, tuple(gens))


def preimage(f: GroupHom, S: Iterable[Element]) -> Subset:
    target = frozenset(canonical_subset(f.target, S))
    return tuple(x for x in f.source.elements if f(x) in target)


def negate_set(G: FabGroup, S: Iterable[Element]) -> Subset:
    return tuple(sorted(G.neg(x) for x in canonical_subset(G, S)))


def projection_hom(G: FabGroup, coord: int) -> GroupHom:
    """Coordinate projection onto Z_{factor}; handy for tests and examples."""
    T = cyclic(G.invariant_factors[coord])
    imgs = tuple((1,) if i == coord else (0,) for i in range(G.rank))
    return GroupHom(G, T, imgs)


def groups_of_order(n: int) -> list[FabGroup]:
    """One representative per isomorphism class of abelian groups of order n."""
    if n < 1:
        raise InvalidArgumentError("order must be positive")
    per_prime = []
    for p, e in sorted(factorint(n).items()):
        shapes = []
        for part in partitions(e):
            shapes.append([p**k for k, m in sorted(part.items(), reverse=True) for _ in range(m)])
        per_prime.append(shapes)
    out = []
    for combo in itertools.product(*per_prime):
        out.append(make_group([q for qs in combo for q in qs]))
    return sorted(out, key=lambda G: (len(G.invariant_factors), G.invariant_factors))
