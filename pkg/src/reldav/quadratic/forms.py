"""Binary quadratic forms: class groups of imaginary quadratic orders and related maps.

A form (A, B, C) stands for A x^2 + B xy + C y^2 with discriminant
B^2 - 4AC.  Primitive positive definite forms of discriminant f^2 d_K give
Cl(R_f) for an imaginary field.  Indefinite forms appear only in
`is_principal_real`, which decides whether a ramified prime is principal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from sympy import nextprime, sqrt_mod

from ..errors import DomainError, InvalidArgumentError, InvariantViolation, PreconditionError
from ..groups import Element, FabGroup, GroupHom, identify_structure, label_map
from .arith import fundamental_discriminant


@dataclass(frozen=True, order=True)
class BQForm:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.A, self.B), self.C) == 1

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        return B >= 0 or (abs(B) != A and A != C)

    def inverse(self) -> "BQForm":
        return reduce_form(BQForm(self.A, -self.B, self.C))

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def __str__(self):
        return f"({self.A},{self.B},{self.C})"

    def to_json(self) -> list[int]:
        return [self.A, self.B, self.C]


def principal_form(disc: int) -> BQForm:
    k = disc % 2
    return BQForm(1, k, (k - disc) // 4)


def reduce_form(f: BQForm) -> BQForm:
    """Reduced representative of a positive definite form."""
    A, B, C = f.A, f.B, f.C
    if A <= 0 or B * B - 4 * A * C >= 0:
        raise DomainError(f"{f} is not positive definite")
    while True:
        # bring B into (-A, A]
        r = (A - B) // (2 * A)
        B, C = B + 2 * r * A, A * r * r + B * r + C
        if A > C or (A == C and B < 0):
            A, B, C = C, -B, A
            continue
        return BQForm(A, B, C)


def compose(f: BQForm, g: BQForm) -> BQForm:
    """Composition of primitive forms of equal discriminant, reduced."""
    if f.disc != g.disc:
        raise DomainError("composition needs equal discriminants")
    if f.A > g.A:
        f, g = g, f
    a1, b1, c1 = f.A, f.B, f.C
    a2, b2, c2 = g.A, g.B, g.C
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _xgcd(s, d)
        x2, y2 = u, -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(BQForm(a3, b3, c3))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


def reduced_forms(disc: int) -> list[BQForm]:
    """All primitive reduced positive definite forms of a negative discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidArgumentError(f"not a negative discriminant: {disc}")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(BQForm(a, b, c))
        a += 1
    return sorted(out)


@dataclass(frozen=True)
class ClassGroup:
    """Cl(R_f) as an abstract group with a reduced form for every element."""

    disc: int
    group: FabGroup
    reps: tuple[BQForm, ...]  # reps[i] represents group.elements[i]

    @cached_property
    def _index(self) -> dict[BQForm, Element]:
        return {f: x for f, x in zip(self.reps, self.group.elements)}

    def element_of(self, f: BQForm) -> Element:
        if f.disc != self.disc:
            raise DomainError(f"{f} has discriminant {f.disc}, expected {self.disc}")
        return self._index[reduce_form(f)]

    def form_of(self, x: Element) -> BQForm:
        return self.reps[self.group.index(tuple(x))]

    @property
    def order(self) -> int:
        return self.group.order


def class_group_imaginary(d: int, f: int) -> ClassGroup:
    """Form class group of discriminant f^2 d_K for negative squarefree d."""
    if d >= 0:
        raise InvalidArgumentError("class_group_imaginary needs d < 0")
    if not isinstance(f, int) or f < 1:
        raise InvalidArgumentError("conductor f must be a positive integer")
    disc = f * f * fundamental_discriminant(d)
    forms = reduced_forms(disc)
    idx = {g: i for i, g in enumerate(forms)}
    table = [[idx[compose(x, y)] for y in forms] for x in forms]
    zero = idx[principal_form(disc)]
    G, basis = identify_structure(len(forms), table, zero)
    labels = label_map(G, basis, table, zero)
    reps = tuple(forms[labels[x]] for x in G.elements)
    return ClassGroup(disc, G, reps)


def ramified_prime_form(disc: int, p: int) -> BQForm:
    """A form (p, b, c) of discriminant disc, for p dividing disc.

    It corresponds to the prime above p; for negative disc it is reduced.
    """
    for b in range(0, 2 * p):
        if (b - disc) % 2 == 0 and (b * b - disc) % (4 * p) == 0:
            f = BQForm(p, b, (b * b - disc) // (4 * p))
            return reduce_form(f) if disc < 0 else f
    raise InvalidArgumentError(f"{p} has no form of discriminant {disc}")


def _sqrt_disc_mod(disc: int, q: int) -> int | None:
    """b in [0, 2q) with b = disc mod 2 and b^2 = disc mod 4q, or None."""
    r = sqrt_mod(disc % q, q)
    if r is None:
        return None
    b = r if (r - disc) % 2 == 0 else r + q
    return b


def going_down(f: BQForm, f1: int, f2: int, budget: int | None = None) -> BQForm:
    """Image of the class of `f` (discriminant f1^2 d_K) in discriminant f2^2 d_K.

    Finds an odd prime q, coprime to f1 * disc, represented by f as (q, b, *);
    the ideal of norm q it stands for extends to the order of conductor f2,
    whose form has middle coefficient b * (f1/f2)^-1 mod q.
    """
    disc1 = f.disc
    if f1 % f2:
        raise InvalidArgumentError("f2 must divide f1")
    k = f1 // f2
    if disc1 % (k * k):
        raise InvalidArgumentError("discriminant does not match the conductors")
    disc2 = disc1 // (k * k)
    if k == 1:
        return reduce_form(f)
    target = reduce_form(f)
    limit = budget if budget is not None else max(10 * abs(disc1), 1000)
    q = 2
    while True:
        q = nextprime(q)
        if q > limit:
            raise PreconditionError(
                f"no represented prime <= {limit} found for class {target} of discriminant {disc1}"
            )
        if (f1 * disc1) % q == 0:
            continue
        b = _sqrt_disc_mod(disc1, q)
        if b is None:
            continue
        for bb in (b, (-b) % (2 * q)):
            g = BQForm(q, bb, (bb * bb - disc1) // (4 * q))
            if reduce_form(g) != target:
                continue
            b2 = bb * pow(k, -1, q) % q
            if (b2 - disc2) % 2:
                b2 += q
            return reduce_form(BQForm(q, b2, (b2 * b2 - disc2) // (4 * q)))


def class_map(src: ClassGroup, dst: ClassGroup, f1: int, f2: int) -> GroupHom:
    """The surjection Cl(R_f1) -> Cl(R_f2) on abstract groups, checked on every class."""
    G = src.group
    images = []
    for i in range(G.rank):
        e = tuple(1 if j == i else 0 for j in range(G.rank))
        images.append(dst.element_of(going_down(src.form_of(e), f1, f2)))
    hom = GroupHom(G, dst.group, tuple(images))
    for x, form in zip(G.elements, src.reps):
        if hom(x) != dst.element_of(going_down(form, f1, f2)):
            raise InvariantViolation(f"class map is not a homomorphism at {form}")
    if not hom.is_surjective():
        raise InvariantViolation("class map is not surjective")
    return hom


# Indefinite forms.  Only the cycle of reduced forms is needed.

def _lt_sqrt(x: int, D: int) -> bool:
    return x < 0 or x * x < D


def _gt_sqrt(x: int, D: int) -> bool:
    return x > 0 and x * x > D


def _is_reduced_indef(A: int, B: int, D: int) -> bool:
    a = abs(A)
    return B > 0 and _lt_sqrt(B, D) and _lt_sqrt(2 * a - B, D) and _gt_sqrt(2 * a + B, D)


def _normalize_indef(A: int, B: int, D: int) -> int:
    a2 = 2 * abs(A)
    s = math.isqrt(D)
    if _gt_sqrt(abs(A), D):
        return B + a2 * ((abs(A) - B) // a2)
    return B + a2 * ((s - B) // a2)


def _rho(f: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    A, B, C = f
    B2 = _normalize_indef(C, -B, D)
    return C, B2, (B2 * B2 - D) // (4 * C)


def reduced_cycle(f: BQForm) -> list[BQForm]:
    """The rho-cycle of reduced forms properly equivalent to an indefinite form."""
    D = f.disc
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise DomainError(f"{f} is not an indefinite form of non-square discriminant")
    cur = (f.A, f.B, f.C)
    steps = 0
    while not _is_reduced_indef(cur[0], cur[1], D):
        cur = _rho(cur, D)
        steps += 1
        if steps > 10 * D:
            raise InvariantViolation(f"reduction of {f} did not terminate")
    start = cur
    out = [BQForm(*cur)]
    while True:
        cur = _rho(cur, D)
        if cur == start:
            return out
        out.append(BQForm(*cur))


def is_principal_real(d: int, p: int) -> bool:
    """Whether the prime of Q(sqrt d), d > 0, over a ramified p is principal.

    The ideal's class is trivial exactly when its cycle of reduced forms
    contains a form with leading coefficient +1 or -1, i.e. when it is
    equivalent to the principal form or to its negative.
    """
    if d <= 0:
        raise InvalidArgumentError("is_principal_real needs d > 0")
    D = fundamental_discriminant(d)
    if D % p:
        raise PreconditionError(f"{p} is not ramified in Q(sqrt {d})")
    return any(abs(g.A) == 1 for g in reduced_cycle(ramified_prime_form(D, p)))
