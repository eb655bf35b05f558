"""Elasticity of an order from class-group data alone.

Inputs are the class group Cl(R), the kernel of the map onto Cl of the
maximal order, the class of the prime P under the conductor I = P^a, and
whether P and I are principal upstairs.  No number field is touched here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

from .errors import (
    InvalidArgumentError,
    InvariantViolation,
    PreconditionError,
    UnsupportedCaseError,
)
from .groups import (
    Element,
    FabGroup,
    GroupHom,
    Subgroup,
    make_subgroup,
    preimage,
    quotient,
)
from .zerosum import davenport, small_rel_davenport


class Elasticity:
    """An exact rational elasticity, or infinity."""

    __slots__ = ("_value",)

    def __init__(self, value: Union[Fraction, int, str, None]):
        if isinstance(value, str):
            value = None if value == "infinite" else Fraction(value)
        if value is not None:
            value = Fraction(value)
            if value < 1:
                raise InvariantViolation(f"finite elasticity must be at least 1, got {value}")
        self._value = value

    @classmethod
    def infinite(cls) -> "Elasticity":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise InvalidArgumentError("infinite elasticity has no rational value")
        return self._value

    def __eq__(self, other):
        if isinstance(other, Elasticity):
            return self._value == other._value
        if isinstance(other, (int, Fraction)):
            return self._value is not None and self._value == other
        return NotImplemented

    def __hash__(self):
        return hash(self._value)

    def _key(self):
        return (1, 0) if self._value is None else (0, self._value)

    @staticmethod
    def _other_key(other):
        if isinstance(other, Elasticity):
            return other._key()
        return (0, Fraction(other))

    def __lt__(self, other):
        return self._key() < self._other_key(other)

    def __le__(self, other):
        return self._key() <= self._other_key(other)

    def __gt__(self, other):
        return self._key() > self._other_key(other)

    def __ge__(self, other):
        return self._key() >= self._other_key(other)

    def __str__(self):
        if self._value is None:
            return "infinite"
        v = self._value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __repr__(self):
        return f"Elasticity({str(self)!r})"

    def to_json(self) -> dict:
        return {"elasticity": str(self)}


INFINITE = Elasticity.infinite()


@dataclass(frozen=True)
class OrderClassData:
    """Class-group picture of an order with conductor I = P^a.

    `p_class` is the class of P in Cl(R)/ker_tau, given in the coordinates of
    `quotient_group`.  Use `from_rep` to give it as any lift in Cl(R) instead,
    which avoids depending on how the quotient is presented.
    """

    clR: FabGroup
    ker_tau: Subgroup
    p_class: Element
    a: int
    p_principal: bool
    conductor_principal: bool
    max_order: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.ker_tau.group != self.clR:
            raise InvalidArgumentError("ker_tau must be a subgroup of clR")
        if not isinstance(self.a, int) or self.a < 1:
            raise InvalidArgumentError("a must be a positive integer")
        Q = self.quotient_group
        Q.check(tuple(self.p_class))
        trivial = tuple(self.p_class) == Q.zero
        if self.p_principal and not trivial:
            raise InvalidArgumentError("p_principal requires p_class to be the identity")
        if not self.p_principal and trivial:
            raise InvalidArgumentError("p_class is the identity, so P is principal")
        # [I] = [P]^a in the quotient, which is the class group of the maximal order
        if self.conductor_principal != (Q.mul(self.a, tuple(self.p_class)) == Q.zero):
            raise InvalidArgumentError(
                f"conductor_principal={self.conductor_principal} contradicts [P]^{self.a} in Cl(R)/ker_tau"
            )

    @classmethod
    def from_rep(cls, clR: FabGroup, ker_elements, p_class_rep, a: int, conductor_principal: bool | None = None, **kw):
        H = make_subgroup(clR, ker_elements)
        Q, pi = quotient(clR, H)
        cls_ = pi(clR.check(tuple(p_class_rep)))
        principal = cls_ == Q.zero
        if conductor_principal is None and isinstance(a, int):
            conductor_principal = Q.mul(a, cls_) == Q.zero
        return cls(clR, H, cls_, a, principal, conductor_principal, **kw)

    @cached_property
    def _quotient(self) -> tuple[FabGroup, GroupHom]:
        return quotient(self.clR, self.ker_tau)

    @property
    def quotient_group(self) -> FabGroup:
        return self._quotient[0]

    @property
    def projection(self) -> GroupHom:
        return self._quotient[1]

    def power_class(self, i: int) -> Element:
        return self.quotient_group.mul(i, tuple(self.p_class))

    @property
    def p_order(self) -> int:
        return self.quotient_group.element_order(tuple(self.p_class))


def d_coset_of_power(data: OrderClassData, i: int, **kw) -> int:
    """d over the preimage of [P^i]; equal to the value for [P^-i]."""
    if i < 0:
        raise InvalidArgumentError("i must be nonnegative")
    kw.setdefault("max_order", data.max_order)
    S = preimage(data.projection, [data.power_class(i)])
    value = small_rel_davenport(data.clR, S, **kw).value
    S_neg = preimage(data.projection, [data.power_class(-i)])
    if S_neg != S and small_rel_davenport(data.clR, S_neg, **kw).value != value:
        raise InvariantViolation(f"d differs between P^{i} and P^-{i}")
    return value


def _davenport(data: OrderClassData, **kw) -> int:
    kw.setdefault("max_order", data.max_order)
    return davenport(data.clR, **kw)


def elasticity_prime_conductor(data: OrderClassData, **kw) -> Elasticity:
    """max{ D/2, (D_{P^i}+1)/2 + i/a : 0 <= i < a } for a principal conductor."""
    if not data.conductor_principal:
        raise UnsupportedCaseError(
            "conductor is not principal in the maximal order; for a = 1 use elasticity_prime_nonprincipal"
        )
    a = data.a
    best = Fraction(_davenport(data, **kw), 2)
    for i in range(a):
        D_i = d_coset_of_power(data, i, **kw) + 1
        best = max(best, Fraction(D_i + 1, 2) + Fraction(i, a))
    return Elasticity(best)


def elasticity_prime_nonprincipal(data: OrderClassData, **kw) -> Elasticity:
    """D(Cl(R))/2 when the conductor is a non-principal prime (a = 1)."""
    if data.a != 1:
        raise UnsupportedCaseError("no formula for a non-principal conductor P^a with a > 1")
    if data.p_principal:
        raise PreconditionError("P is principal; use elasticity_prime_conductor")
    return Elasticity(Fraction(_davenport(data, **kw), 2))


def infinite_elasticity_guard(primes_over_conductor: int) -> Elasticity | None:
    """INFINITE when more than one maximal-order prime lies over the conductor prime, else None."""
    if primes_over_conductor < 1:
        raise InvalidArgumentError("there is at least one prime over the conductor")
    return INFINITE if primes_over_conductor > 1 else None


def simpler_formula_if_dominant(data: OrderClassData, **kw) -> Elasticity:
    """max{ D/2, (D_P+1)/2 + (a-1)/a }, valid once D_P dominates every D_{P^i}."""
    if not data.conductor_principal:
        raise PreconditionError("requires a principal conductor")
    d_P = d_coset_of_power(data, 1, **kw)
    for i in sorted(set(range(data.a)) | set(range(data.p_order))):
        d_i = d_coset_of_power(data, i, **kw)
        if d_i > d_P:
            raise PreconditionError(f"D_P is not dominant: D_(P^{i}) = {d_i + 1} > D_P = {d_P + 1}")
    a = data.a
    result = Elasticity(
        max(Fraction(_davenport(data, **kw), 2), Fraction(d_P + 2, 2) + Fraction(a - 1, a))
    )
    general = elasticity_prime_conductor(data, **kw)
    if result != general:
        raise InvariantViolation(f"simplified formula {result} disagrees with the general one {general}")
    return result


def locally_associated_numeric_test(h_R: int, h_max: int) -> bool:
    """Cl(R) maps onto Cl of the maximal order, so equal orders force isomorphism."""
    if h_R < 1 or h_max < 1:
        raise InvalidArgumentError("class numbers must be positive")
    return h_R == h_max


def counterexample_condition(data: OrderClassData, rho_max) -> bool:
    """Whether rho(maximal order) >= (2a-1)/a for a locally associated order with P principal."""
    if data.ker_tau.order != 1:
        raise PreconditionError("the order must be locally associated (trivial kernel)")
    if not data.p_principal:
        raise PreconditionError("P must be principal")
    if data.a < 2:
        raise PreconditionError("a must be at least 2")
    rho = rho_max.value if isinstance(rho_max, Elasticity) else Fraction(rho_max)
    return rho >= Fraction(2 * data.a - 1, data.a)


def elasticity_of_order(data: OrderClassData, primes_over_conductor: int = 1, **kw) -> tuple[Elasticity, str]:
    """Pick the applicable formula; returns the value and the rule used."""
    guard = infinite_elasticity_guard(primes_over_conductor)
    if guard is not None:
        return guard, "several primes over the conductor"
    if data.a == 1 and not data.p_principal:
        return elasticity_prime_nonprincipal(data, **kw), "non-principal prime conductor"
    if data.conductor_principal:
        return elasticity_prime_conductor(data, **kw), "principal conductor P^a"
    raise UnsupportedCaseError("no formula for a non-principal conductor P^a with a > 1")
