"""Elasticity of the quadratic orders R_{p^a}.

Two routes:

* the general formula, max{ D/2, a + D_P/2 (ramified only), j + d_j/2 },
  which needs Cl(R_n) and the kernels of the maps down to every Cl(R_{p^i}).
  Imaginary fields get these from forms; other fields must supply them.
* the cyclic shortcut h'/2 + max{0, a - c} with c depending on the splitting
  and on whether P is principal, which needs only the two class numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..elasticity import INFINITE, Elasticity, infinite_elasticity_guard
from ..errors import (
    InvalidArgumentError,
    InvariantViolation,
    PreconditionError,
    UnsupportedCaseError,
)
from ..groups import (
    FabGroup,
    GroupHom,
    Subgroup,
    Subset,
    coset_of,
    groups_of_order,
    make_subgroup,
    preimage,
)
from ..zerosum import davenport, small_rel_davenport
from .arith import L_function, QuadraticOrderSpec, Splitting, genus_two_rank_bound, split_primes
from .forms import ClassGroup, class_group_imaginary, class_map, is_principal_real, ramified_prime_form
from .htable import lookup_class_number
from .units import UnitData, format_unit, unit_data


@dataclass(frozen=True)
class TauLadder:
    """Cl(R_n) for n = p^a with the kernels of tau_i : Cl(R_n) -> Cl(R_{p^i}), i = 0..a.

    `p_coset` is the preimage of the class of P in Cl(R_n) when p ramifies
    and that class is known.
    """

    top: FabGroup
    kernels: tuple[Subgroup, ...]
    maps: tuple[GroupHom, ...] | None = None
    class_groups: tuple[ClassGroup, ...] | None = field(default=None, compare=False)
    p_coset: Subset | None = None

    def __post_init__(self):
        if not self.kernels:
            raise InvalidArgumentError("a ladder needs at least the kernel of tau_0")
        for K in self.kernels:
            if K.group != self.top:
                raise InvalidArgumentError("every kernel must be a subgroup of Cl(R_n)")
        for big, small in zip(self.kernels, self.kernels[1:]):
            if not all(x in big for x in small.elements):
                raise InvariantViolation("kernels of the tau maps are not nested")
        if self.kernels[-1].order != 1:
            raise InvariantViolation("tau_a is the identity, its kernel must be trivial")
        if self.class_groups is not None:
            for K, C in zip(self.kernels, self.class_groups):
                if self.top.order != K.order * C.order:
                    raise InvariantViolation("|Cl(R_n)| / |ker tau_i| differs from |Cl(R_{p^i})|")

    @property
    def a(self) -> int:
        return len(self.kernels) - 1

    def summary(self) -> dict:
        out = {
            "cl_Rn": self.top.spec(),
            "kernel_orders": [K.order for K in self.kernels],
        }
        if self.class_groups is not None:
            out["class_groups"] = [C.group.spec() for C in self.class_groups]
        return out


def tau_ladder_imaginary(spec: QuadraticOrderSpec, budget: int | None = None) -> TauLadder:
    """Build Cl(R_{p^i}) for i = 0..a from forms, and the maps down from Cl(R_n)."""
    if not spec.imaginary:
        raise InvalidArgumentError("tau_ladder_imaginary needs d < 0")
    if spec.splitting is Splitting.SPLIT:
        raise PreconditionError(f"{spec.p} splits in Q(sqrt {spec.d})")
    p, a = spec.p, spec.a
    groups = tuple(class_group_imaginary(spec.d, p**i) for i in range(a + 1))
    top = groups[a]
    maps = tuple(class_map(top, groups[i], p**a, p**i) for i in range(a + 1))
    kernels = tuple(m.kernel() for m in maps)
    p_coset = None
    if spec.splitting is Splitting.RAMIFIED:
        cls = groups[0].element_of(ramified_prime_form(spec.d_K, p))
        p_coset = preimage(maps[0], [cls])
    return TauLadder(top.group, kernels, maps, groups, p_coset)


def supplied_ladder(
    top: FabGroup, kernels, p_class_rep=None, p_principal: bool | None = None
) -> TauLadder:
    """Ladder from user data: kernels[i] lists the elements of ker tau_i, i = 0..a."""
    subs = tuple(make_subgroup(top, k) for k in kernels)
    p_coset = None
    if p_class_rep is not None:
        p_coset = coset_of(top, top.check(tuple(p_class_rep)), subs[0])
    elif p_principal:
        p_coset = subs[0].elements
    return TauLadder(top, subs, None, None, p_coset)


def dj_values(spec: QuadraticOrderSpec, ladder: TauLadder, units: UnitData, **kw) -> list[int]:
    """d_1..d_a: d over ker tau_{a-j}, or over ker tau_{a-j} minus ker tau_{a-j+1} when units agree."""
    a = spec.a
    if ladder.a != a or units.a < a:
        raise InvalidArgumentError("ladder, unit data and spec disagree on a")
    out = []
    for j in range(1, a + 1):
        i = a - j
        K = ladder.kernels[i]
        if units.same_units(i):
            inner = set(ladder.kernels[i + 1].elements)
            S = [x for x in K.elements if x not in inner]
            if not S:
                raise InvariantViolation(
                    f"equal units between R_(p^{i}) and R_(p^{i + 1}) but the kernels coincide"
                )
        else:
            S = K.elements
        out.append(small_rel_davenport(ladder.top, S, **kw).value)
    return out


def elasticity_Rn_cyclic(h: int, h_prime: int, a: int, splitting, p_principal: bool | None = None) -> Elasticity:
    """Closed form when Cl(R_n) is cyclic of order h' over Cl(O) of order h."""
    splitting = Splitting(splitting)
    if h < 1 or h_prime < 1 or a < 1:
        raise InvalidArgumentError("h, h' and a must be positive")
    if h_prime % h:
        raise InvalidArgumentError(f"h = {h} does not divide h' = {h_prime}")
    if splitting is Splitting.SPLIT:
        raise InvalidArgumentError("split primes give infinite elasticity; no cyclic formula applies")
    if splitting is Splitting.INERT:
        c = Fraction(h, 2)
    elif p_principal is None:
        raise InvalidArgumentError("ramified p needs p_principal")
    elif p_principal:
        c = Fraction(h - 1, 2)
    else:
        if h % 2:
            raise InvalidArgumentError("a non-principal ramified prime has order 2, so h must be even")
        c = Fraction(h - 2, 4)
    return Elasticity(Fraction(h_prime, 2) + max(Fraction(0), a - c))


def cl_Rn_order(h: int, spec: QuadraticOrderSpec, units: UnitData) -> int:
    """|Cl(R_n)| = h * L(n, d) / [U(O) : U(R_n)]."""
    if h < 1:
        raise InvalidArgumentError("h must be positive")
    num = h * L_function(spec.n, spec.d)
    k = units.k[spec.a]
    if num % k:
        raise InvariantViolation(f"class number h*L/k = {num}/{k} is not an integer")
    return num // k


def infer_cyclic(h_prime: int, h: int) -> str:
    """Classify Cl(R_n) among abelian groups of order h' with a Z_h quotient.

    Assumes Cl(O) is cyclic of order h.  Returns "cyclic", "non-cyclic" or
    "ambiguous".
    """
    if h < 1 or h_prime < 1 or h_prime % h:
        raise InvalidArgumentError(f"need h | h', got h={h}, h'={h_prime}")
    fits = [G for G in groups_of_order(h_prime) if G.exponent % h == 0]
    cyc = [G for G in fits if G.is_cyclic]
    if cyc and len(fits) == 1:
        return "cyclic"
    if not cyc:
        return "non-cyclic"
    return "ambiguous"


@dataclass
class QuadraticResult:
    spec: QuadraticOrderSpec
    elasticity: Elasticity
    davenport_cl: int | None = None
    trace: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "elasticity": str(self.elasticity),
            "trace": self.trace,
            "notes": self.notes,
        }


def elasticity_Rn(
    spec: QuadraticOrderSpec,
    ladder: TauLadder | None = None,
    units: UnitData | None = None,
    **kw,
) -> QuadraticResult:
    """General formula for rho(R_{p^a}); imaginary fields build their own ladder."""
    trace: dict = {"splitting": str(spec.splitting)}
    if spec.splitting is Splitting.SPLIT:
        return QuadraticResult(spec, infinite_elasticity_guard(2), None, trace)
    if units is None:
        units = unit_data(spec.d, spec.p, spec.a)
    if ladder is None:
        if not spec.imaginary:
            raise UnsupportedCaseError(
                "real fields need a supplied ladder; for cyclic Cl(R_n) use elasticity_Rn_cyclic"
            )
        ladder = tau_ladder_imaginary(spec)
    G = ladder.top
    D = davenport(G, **kw)
    dj = dj_values(spec, ladder, units, **kw)
    terms = {"D/2": Fraction(D, 2)}
    if spec.splitting is Splitting.RAMIFIED:
        if ladder.p_coset is None:
            raise PreconditionError("ramified p needs the class of P (p_class_rep or p_principal)")
        D_P = small_rel_davenport(G, ladder.p_coset, **kw).value + 1
        terms["a+D_P/2"] = spec.a + Fraction(D_P, 2)
        trace["D_P"] = D_P
    for j, d in enumerate(dj, start=1):
        terms[f"{j}+d_{j}/2"] = j + Fraction(d, 2)
    rho = max(terms.values())
    if rho < spec.a:
        raise InvariantViolation(f"elasticity {rho} is below a = {spec.a}")
    trace.update(
        {
            "ladder": ladder.summary(),
            "unit_indices": list(units.k[: spec.a + 1]),
            "D": D,
            "d_j": dj,
            "terms": {k: _fmt(v) for k, v in terms.items()},
        }
    )
    return QuadraticResult(spec, Elasticity(rho), D, trace)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def quadratic_pipeline(
    spec: QuadraticOrderSpec,
    h: int | None = None,
    p_principal: bool | None = None,
    ladder: TauLadder | None = None,
    **kw,
) -> QuadraticResult:
    """Full derivation of rho(R_{p^a}) with a trace of every intermediate value."""
    notes: list[str] = []
    trace: dict = {"splitting": str(spec.splitting), "alpha": spec.alpha_kind, "d_K": spec.d_K}
    if spec.splitting is Splitting.SPLIT:
        trace["reason"] = f"{spec.p} splits into two primes"
        return QuadraticResult(spec, INFINITE, None, trace, notes)

    units = unit_data(spec.d, spec.p, spec.a)
    L = L_function(spec.n, spec.d)
    if split_primes(spec.n, spec.d):
        notes.append("L uses p-1 for split primes, a value not relied on here")
    trace["L"] = L
    trace["unit"] = format_unit(spec.d, units.u)
    trace["unit_index"] = units.k[spec.a]

    if h is None:
        if spec.imaginary:
            h = class_group_imaginary(spec.d, 1).order
            notes.append("h computed from reduced forms")
        else:
            h = lookup_class_number(spec.d)
            if h is None:
                raise PreconditionError(f"no bundled class number for d = {spec.d}; pass h explicitly")
            notes.append("h taken from the bundled class-number table (external data)")
    else:
        notes.append("h supplied by the caller")
    trace["h"] = h
    h_prime = cl_Rn_order(h, spec, units)
    trace["h_prime"] = h_prime

    if spec.splitting is Splitting.RAMIFIED:
        if p_principal is None:
            p_principal = _p_is_principal(spec, h)
        trace["p_principal"] = p_principal

    if ladder is not None or spec.imaginary:
        res = elasticity_Rn(spec, ladder, units, **kw)
        res.trace = {**trace, **res.trace}
        res.notes = notes + res.notes
        top = ladder.top if ladder is not None else res.trace["ladder"]["cl_Rn"]["invariant_factors"]
        order = top.order if ladder is not None else FabGroup(tuple(top)).order
        if order != h_prime:
            raise InvariantViolation(f"Cl(R_n) has order {order} but h*L/k = {h_prime}")
        is_cyclic = ladder.top.is_cyclic if ladder is not None else len(top) <= 1
        if is_cyclic:
            cyc = elasticity_Rn_cyclic(h, h_prime, spec.a, spec.splitting, p_principal)
            res.trace["cyclic_formula"] = str(cyc)
            if cyc != res.elasticity:
                raise InvariantViolation(f"cyclic formula {cyc} disagrees with the general one {res.elasticity}")
        return res

    verdict = infer_cyclic(h_prime, h)
    trace["cyclicity"] = verdict
    notes.append("cyclicity inferred assuming Cl(O) is cyclic of order h")
    bound = genus_two_rank_bound(spec.d)
    if bound >= 2:
        notes.append(
            f"warning: genus theory gives Cl(O) 2-rank >= {bound}, so Cl(O) is not cyclic "
            "and the cyclicity inference rests on an assumption that fails for this field"
        )
    if verdict != "cyclic":
        raise UnsupportedCaseError(
            f"Cl(R_n) of order {h_prime} over h = {h} is {verdict}; supply a ladder to use the general formula"
        )
    rho = elasticity_Rn_cyclic(h, h_prime, spec.a, spec.splitting, p_principal)
    if rho < spec.a:
        raise InvariantViolation(f"elasticity {rho} is below a = {spec.a}")
    return QuadraticResult(spec, rho, h_prime, trace, notes)


def _p_is_principal(spec: QuadraticOrderSpec, h: int) -> bool:
    if h == 1:
        return True
    if spec.imaginary:
        C = class_group_imaginary(spec.d, 1)
        return C.element_of(ramified_prime_form(spec.d_K, spec.p)) == C.group.zero
    # P^2 = (p), so [P] has order dividing 2 and is trivial when h is odd
    return h % 2 == 1 or is_principal_real(spec.d, spec.p)


@dataclass
class MonotonicityReport:
    small: QuadraticResult
    large: QuadraticResult
    strict: bool

    def to_json(self) -> dict:
        return {
            "rho_small": str(self.small.elasticity),
            "rho_large": str(self.large.elasticity),
            "strict": self.strict,
            "holds": True,
        }


def monotonicity_check(spec_small: QuadraticOrderSpec, b: int, **kw) -> MonotonicityReport:
    """rho(R_{p^a}) <= rho(R_{p^b}), with equality exactly when both equal D(Cl(R_{p^a}))/2."""
    if b <= spec_small.a:
        raise InvalidArgumentError("b must exceed a")
    small = quadratic_pipeline(spec_small, **kw)
    large = quadratic_pipeline(spec_small.with_exponent(b), **kw)
    rs, rl = small.elasticity, large.elasticity
    if rs.is_infinite or rl.is_infinite:
        raise PreconditionError("monotonicity needs a non-split prime")
    if not rs <= rl:
        raise InvariantViolation(f"rho(R_p^a) = {rs} exceeds rho(R_p^b) = {rl}")
    half = Fraction(small.davenport_cl, 2)
    if (rs == rl) != (rs.value == half and rl.value == half):
        raise InvariantViolation("equality case does not match D(Cl(R_p^a))/2")
    return MonotonicityReport(small, large, rs != rl)
