"""JSON shapes shared by the command line and by callers embedding the library.

Groups are ``{"invariant_factors": [2, 6]}`` (a bare list is accepted too),
elements are integer arrays and subsets are arrays of elements.
"""

from __future__ import annotations

import json
from typing import Any

from .elasticity import OrderClassData
from .errors import InvalidArgumentError
from .groups import FabGroup, make_group, make_subgroup, quotient
from .quadratic.arith import QuadraticOrderSpec
from .quadratic.engine import TauLadder, supplied_ladder


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"malformed JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _int_list(obj, what: str) -> list[int]:
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise InvalidArgumentError(f"{what} must be an array of integers, got {obj!r}")
    return obj


def group_from_json(obj) -> FabGroup:
    if isinstance(obj, dict):
        if set(obj) != {"invariant_factors"}:
            raise InvalidArgumentError(f"group spec must have exactly the key invariant_factors, got {sorted(obj)}")
        obj = obj["invariant_factors"]
    return make_group(_int_list(obj, "invariant_factors"))


def element_from_json(G: FabGroup, obj):
    return G.check(tuple(_int_list(obj, "element")))


def subset_from_json(G: FabGroup, obj) -> list:
    if not isinstance(obj, list):
        raise InvalidArgumentError(f"a subset must be an array of elements, got {obj!r}")
    return [element_from_json(G, x) for x in obj]


def _require(obj: dict, key: str, kind, what: str):
    if key not in obj:
        raise InvalidArgumentError(f"{what} is missing {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise InvalidArgumentError(f"{what}: {key!r} has the wrong type")
    return value


def order_data_from_json(obj, max_order: int | None = None) -> tuple[OrderClassData, int]:
    """OrderClassData and the number of maximal-order primes over the conductor prime.

    The class of P is given either as ``p_class`` (coordinates in the quotient
    Cl(R)/ker as presented by `reldav.groups.quotient`) or as ``p_class_rep``,
    any lift of it in Cl(R).
    """
    if not isinstance(obj, dict):
        raise InvalidArgumentError("order data must be a JSON object")
    what = "order data"
    G = group_from_json(_require(obj, "group", (dict, list), what))
    ker = subset_from_json(G, _require(obj, "ker_tau", list, what))
    a = _require(obj, "a", int, what)
    primes = obj.get("primes_over_conductor", 1)
    if not isinstance(primes, int) or isinstance(primes, bool):
        raise InvalidArgumentError("primes_over_conductor must be an integer")
    conductor_principal = obj.get("conductor_principal")
    if conductor_principal is not None and not isinstance(conductor_principal, bool):
        raise InvalidArgumentError("conductor_principal must be a boolean")
    if ("p_class" in obj) == ("p_class_rep" in obj):
        raise InvalidArgumentError("give exactly one of p_class and p_class_rep")
    if "p_class_rep" in obj:
        data = OrderClassData.from_rep(
            G, ker, element_from_json(G, obj["p_class_rep"]), a, conductor_principal, max_order=max_order
        )
    else:
        H = make_subgroup(G, ker)
        Q, _ = quotient(G, H)
        cls = element_from_json(Q, obj["p_class"])
        principal = cls == Q.zero
        if conductor_principal is None:
            conductor_principal = Q.mul(a, cls) == Q.zero
        data = OrderClassData(G, H, cls, a, principal, conductor_principal, max_order)
    if "p_principal" in obj and obj["p_principal"] != data.p_principal:
        raise InvalidArgumentError("p_principal contradicts the class of P")
    return data, primes


def quadratic_from_json(obj) -> tuple[QuadraticOrderSpec, dict]:
    """The order spec plus keyword arguments for `quadratic_pipeline`."""
    if not isinstance(obj, dict):
        raise InvalidArgumentError("quadratic spec must be a JSON object")
    what = "quadratic spec"
    spec = QuadraticOrderSpec(_require(obj, "d", int, what), _require(obj, "p", int, what), _require(obj, "a", int, what))
    kw: dict = {}
    if "h" in obj:
        kw["h"] = _require(obj, "h", int, what)
        if kw["h"] < 1:
            raise InvalidArgumentError("h must be positive")
    if "p_principal" in obj:
        kw["p_principal"] = _require(obj, "p_principal", bool, what)
    if "ladder" in obj:
        kw["ladder"] = ladder_from_json(obj["ladder"], kw.get("p_principal"))
    unknown = set(obj) - {"d", "p", "a", "h", "p_principal", "ladder"}
    if unknown:
        raise InvalidArgumentError(f"unknown keys in quadratic spec: {sorted(unknown)}")
    return spec, kw


def ladder_from_json(obj, p_principal: bool | None = None) -> TauLadder:
    if not isinstance(obj, dict):
        raise InvalidArgumentError("ladder must be a JSON object")
    G = group_from_json(_require(obj, "group", (dict, list), "ladder"))
    kernels = _require(obj, "kernels", list, "ladder")
    rep = obj.get("p_class_rep")
    return supplied_ladder(
        G,
        [subset_from_json(G, k) for k in kernels],
        None if rep is None else element_from_json(G, rep),
        p_principal,
    )
