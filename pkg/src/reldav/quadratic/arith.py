"""Arithmetic of a quadratic field Q(sqrt d): discriminants, splitting, the L function."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from sympy import factorint, isprime

from ..errors import InvalidArgumentError


class Splitting(str, enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"

    def __str__(self):
        return self.value


def is_squarefree(d: int) -> bool:
    return d != 0 and all(e == 1 for e in factorint(abs(d)).values())


def check_field(d: int) -> None:
    if not isinstance(d, int) or d in (0, 1) or not is_squarefree(d):
        raise InvalidArgumentError(f"d must be a squarefree integer other than 0 and 1, got {d}")


def fundamental_discriminant(d: int) -> int:
    check_field(d)
    return d if d % 4 == 1 else 4 * d


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D|p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    if D % p == 0:
        return 0
    return 1 if pow(D % p, (p - 1) // 2, p) == 1 else -1


def splitting_type(d: int, p: int) -> Splitting:
    check_field(d)
    if not isprime(p):
        raise InvalidArgumentError(f"{p} is not prime")
    k = kronecker(fundamental_discriminant(d), p)
    if k == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if k == 1 else Splitting.INERT


def L_function(n: int, d: int) -> int:
    """L(n, d) = prod p^(r-1) * L(p, d) over p^r || n.

    L(p, d) is p for ramified p and p + 1 for inert p.  Split primes use
    p - 1; callers can detect that case with `split_primes`.
    """
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    out = 1
    for p, r in factorint(n).items():
        s = splitting_type(d, p)
        base = {Splitting.RAMIFIED: p, Splitting.INERT: p + 1, Splitting.SPLIT: p - 1}[s]
        out *= p ** (r - 1) * base
    return out


def split_primes(n: int, d: int) -> list[int]:
    return [p for p in sorted(factorint(n)) if splitting_type(d, p) is Splitting.SPLIT]


def genus_two_rank_bound(d: int) -> int:
    """Lower bound for the 2-rank of the class group of Q(sqrt d).

    With t prime divisors of the discriminant, the narrow class group has
    2-rank t - 1; the ordinary class group loses at most one from that for
    real fields and nothing for imaginary ones.
    """
    t = len(factorint(abs(fundamental_discriminant(d))))
    return t - 1 if d < 0 else max(t - 2, 0)


@dataclass(frozen=True)
class QuadraticOrderSpec:
    """The order R_n = Z[n alpha] with n = p^a in Q(sqrt d)."""

    d: int
    p: int
    a: int

    def __post_init__(self):
        check_field(self.d)
        if not isinstance(self.p, int) or not isprime(self.p):
            raise InvalidArgumentError(f"p must be prime, got {self.p}")
        if not isinstance(self.a, int) or self.a < 1:
            raise InvalidArgumentError(f"a must be a positive integer, got {self.a}")

    @property
    def n(self) -> int:
        return self.p**self.a

    @cached_property
    def d_K(self) -> int:
        return fundamental_discriminant(self.d)

    @cached_property
    def splitting(self) -> Splitting:
        return splitting_type(self.d, self.p)

    @property
    def alpha_kind(self) -> str:
        return "(1+sqrt d)/2" if self.d % 4 == 1 else "sqrt d"

    @property
    def imaginary(self) -> bool:
        return self.d < 0

    def with_exponent(self, a: int) -> "QuadraticOrderSpec":
        return QuadraticOrderSpec(self.d, self.p, a)

    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "a": self.a}
