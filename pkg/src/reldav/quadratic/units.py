"""Units of quadratic orders.

Elements of the maximal order are written x + y*alpha, with alpha = sqrt d, or
(1 + sqrt d)/2 when d = 1 mod 4.  Then x + y*alpha lies in R_m = Z + m*O
exactly when m divides y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidArgumentError, InvariantViolation
from .arith import check_field

Pair = tuple[int, int]


def _alpha_square(d: int) -> Pair:
    """alpha^2 as x + y*alpha."""
    return (d, 0) if d % 4 != 1 else ((d - 1) // 4, 1)


def mul(d: int, u: Pair, v: Pair, m: int | None = None) -> Pair:
    (x1, y1), (x2, y2) = u, v
    sx, sy = _alpha_square(d)
    yy = y1 * y2
    x = x1 * x2 + yy * sx
    y = x1 * y2 + x2 * y1 + yy * sy
    if m is not None:
        x, y = x % m, y % m
    return x, y


def norm(d: int, u: Pair) -> int:
    x, y = u
    if d % 4 == 1:
        return x * x + x * y - (d - 1) // 4 * y * y
    return x * x - d * y * y


def to_sqrt_form(d: int, u: Pair) -> tuple[Pair, int]:
    """(X, Y), k with x + y*alpha = (X + Y sqrt d)/k."""
    x, y = u
    if d % 4 == 1:
        return (2 * x + y, y), 2
    return (x, y), 1


def format_unit(d: int, u: Pair) -> str:
    (X, Y), k = to_sqrt_form(d, u)
    body = f"{X}{'+' if Y >= 0 else '-'}{abs(Y)}*sqrt({d})"
    return body if k == 1 else f"({body})/{k}"


def fundamental_unit(d: int) -> Pair:
    """Fundamental unit > 1 of the maximal order of Q(sqrt d), d > 1.

    Walks the continued fraction of alpha; the first convergent p/q with
    p - q*alpha' of norm +-1 (alpha' the conjugate) gives the unit.
    """
    check_field(d)
    if d < 2:
        raise InvalidArgumentError("fundamental units exist only for real fields (d >= 2)")
    s = math.isqrt(d)
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    while True:
        c = (P + s) // Q
        h0, h1 = c * h0 + h1, h0
        k0, k1 = c * k0 + k1, k0
        if d % 4 == 1:
            u = (h0 - k0, k0)  # h - k*conj(alpha) = (h - k) + k*alpha
        else:
            u = (h0, k0)
        if abs(norm(d, u)) == 1:
            return u
        P = c * Q - P
        Q = (d - P * P) // Q


def torsion_generator(d: int) -> Pair:
    """Generator of the roots of unity in the maximal order."""
    if d == -1:
        return (0, 1)
    if d == -3:
        return (0, 1)  # alpha = (1 + sqrt -3)/2 is a primitive sixth root
    return (-1, 0)


def unit_index(d: int, u: Pair, m: int) -> int:
    """Least k >= 1 with u^k in R_m; coefficients are tracked mod m."""
    if m < 1:
        raise InvalidArgumentError("m must be positive")
    if m == 1:
        return 1
    base = (u[0] % m, u[1] % m)
    cur = base
    k = 1
    while cur[1] != 0:
        cur = mul(d, cur, base, m)
        k += 1
        if k > 6 * m * m:
            raise InvariantViolation(f"no power of {u} found in R_{m}")
    return k


@dataclass(frozen=True)
class UnitData:
    """Unit generator of the maximal order and k_i = [U(O) : U(R_{p^i})] for i = 0..a.

    For real fields the generator is the fundamental unit; for imaginary ones
    it generates the roots of unity, so the indices carry the torsion.
    """

    d: int
    u: Pair
    p: int
    k: tuple[int, ...]

    def __post_init__(self):
        if self.k[0] != 1:
            raise InvariantViolation("k_0 must be 1")
        for a, b in zip(self.k, self.k[1:]):
            if b % a:
                raise InvariantViolation(f"unit indices {self.k} do not form a divisor chain")

    @property
    def a(self) -> int:
        return len(self.k) - 1

    def same_units(self, i: int) -> bool:
        """Whether U(R_{p^i}) = U(R_{p^(i+1)})."""
        return self.k[i] == self.k[i + 1]


def unit_data(d: int, p: int, a: int) -> UnitData:
    u = fundamental_unit(d) if d > 0 else torsion_generator(d)
    return UnitData(d, u, p, tuple(unit_index(d, u, p**i) for i in range(a + 1)))
