"""Command-line front end: ``reldav <command> ...``.

Every command builds a RunReport.  By default a short human-readable
summary is printed; ``--json`` prints the whole report as one canonical JSON
object.  Exit codes: 0 success, 1 a conjecture violation or a failed golden
row, 2 bad input, 3 the group-size guard, 4 a case no formula covers.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import jsonio
from .cache import DavenportCache, default_cache_path
from .elasticity import (
    OrderClassData,
    counterexample_condition,
    elasticity_of_order,
    elasticity_prime_conductor,
    locally_associated_numeric_test,
)
from .errors import GroupTooLargeError, InvariantViolation, ReldavError, UnsupportedCaseError
from .groups import FabGroup, cyclic, make_group
from .quadratic.arith import QuadraticOrderSpec
from .quadratic.engine import monotonicity_check, quadratic_pipeline
from .zerosum import MAX_GROUP_ORDER, groups_up_to, small_rel_davenport, sweep_conjectures

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TOO_LARGE, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4

@dataclass
class RunReport:
    command: list[str]
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)  # human summary, not part of the JSON
    exit_code: int = EXIT_OK
    seconds: float = 0.0
    cache: dict | None = None
    as_json: bool = False

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "exit_code": self.exit_code,
            "runtime": {"seconds": round(self.seconds, 3), "cache": self.cache},
        }


@dataclass
class Context:
    jobs: int
    cache: DavenportCache | None
    max_order: int

    @property
    def kw(self) -> dict:
        return {"cache": self.cache, "max_order": self.max_order}


def _json_arg(text: str):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    elif text == "-":
        text = sys.stdin.read()
    return jsonio.loads(text)


def _wit(seq) -> list | None:
    return None if seq is None else [list(x) for x in seq]


# commands


def cmd_davenport(args, ctx: Context, rep: RunReport) -> None:
    G = jsonio.group_from_json(_json_arg(args.group))
    S = G.elements if args.subset is None else jsonio.subset_from_json(G, _json_arg(args.subset))
    res = small_rel_davenport(G, S, **ctx.kw)
    rep.inputs = {"group": G.spec(), "subset": None if args.subset is None else [list(x) for x in res.subset]}
    rep.outputs = {"D": res.rel_davenport, "d": res.value}
    rep.witnesses = {"longest_zero_sum_free": _wit(res.witness)}
    name = "D(G)" if args.subset is None else "D_S(G)"
    rep.lines = [f"{name} = {res.rel_davenport}", f"witness: {_wit(res.witness)}"]


def cmd_srel(args, ctx: Context, rep: RunReport) -> None:
    G = jsonio.group_from_json(_json_arg(args.group))
    S = jsonio.subset_from_json(G, _json_arg(args.subset))
    res = small_rel_davenport(G, S, **ctx.kw)
    rep.inputs = {"group": G.spec(), "subset": [list(x) for x in res.subset]}
    rep.outputs = {"d": res.value, "D": res.rel_davenport}
    rep.witnesses = {"longest_zero_sum_free": _wit(res.witness)}
    rep.lines = [f"d_S(G) = {res.value}", f"witness: {_wit(res.witness)}"]


_TERM = re.compile(r"Z(\d*)(k?)$")


def family_groups(family: str, k_max: int) -> list[FabGroup]:
    """Groups of a family such as 'Z2xZ2k' or 'Zk' for k = 1..k_max, deduplicated."""
    terms = []
    for t in family.split("x"):
        m = _TERM.match(t.strip())
        if not m or not (m.group(1) or m.group(2)):
            raise jsonio.InvalidArgumentError(f"bad family term {t!r}; expected Z<c>, Z<c>k or Zk")
        terms.append((int(m.group(1) or 1), bool(m.group(2))))
    out, seen = [], set()
    for k in range(1, k_max + 1):
        factors = [c * k if var else c for c, var in terms]
        G = make_group([f for f in factors if f > 1])
        if G.invariant_factors not in seen:
            seen.add(G.invariant_factors)
            out.append(G)
    return out


def cmd_conjectures(args, ctx: Context, rep: RunReport) -> None:
    if (args.max_order is None) == (args.family is None):
        raise jsonio.InvalidArgumentError("give exactly one of --max-order and --family")
    if args.family is not None:
        groups = family_groups(args.family, args.k_max)
        rep.inputs = {"family": args.family, "k_max": args.k_max}
    else:
        groups = groups_up_to(args.max_order)
        rep.inputs = {"max_order": args.max_order}
    results = sweep_conjectures(groups, jobs=ctx.jobs, cache=ctx.cache, max_order=ctx.max_order)
    rows, total_cases, total_viol = [], 0, 0
    rep.lines = [f"{'group':<16} {'generator':>18} {'subgroup_difference':>22}"]
    for gen, dif in results:
        row = {"group": gen.group.spec()}
        cells = []
        for r in (gen, dif):
            row[r.conjecture] = {"cases_checked": r.cases_checked, "violations": len(r.violations)}
            total_cases += r.cases_checked
            total_viol += len(r.violations)
            cells.append(f"{len(r.violations)}/{r.cases_checked}")
            if r.violations:
                rep.witnesses.setdefault(repr(r.group), {})[r.conjecture] = r.violations
        rows.append(row)
        rep.lines.append(f"{repr(gen.group):<16} {cells[0]:>18} {cells[1]:>22}")
    rep.outputs = {"groups": rows, "cases_checked": total_cases, "violations": total_viol}
    rep.lines.append(f"{len(groups)} groups, {total_cases} cases, {total_viol} violations (violations/cases)")
    if total_viol:
        rep.exit_code = EXIT_FAIL


def cmd_elasticity_order(args, ctx: Context, rep: RunReport) -> None:
    obj = _json_arg(args.input)
    data, primes = jsonio.order_data_from_json(obj, ctx.max_order)
    rho, rule = elasticity_of_order(data, primes, cache=ctx.cache)
    rep.inputs = obj
    rep.outputs = {"elasticity": str(rho), "rule": rule}
    rep.lines = [f"rho = {rho}  ({rule})"]


def cmd_elasticity_quadratic(args, ctx: Context, rep: RunReport) -> None:
    obj = _json_arg(args.input)
    spec, kw = jsonio.quadratic_from_json(obj)
    res = quadratic_pipeline(spec, **kw, **ctx.kw)
    rep.inputs = obj
    rep.outputs = {"elasticity": str(res.elasticity), "trace": res.trace}
    rep.notes.extend(res.notes)
    rep.lines = [f"rho(R_{spec.n}) in Q(sqrt {spec.d}) = {res.elasticity}"]
    rep.lines += [f"  {k}: {jsonio.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in res.trace.items()]


# golden suite


@dataclass
class GoldenRow:
    key: str
    label: str
    expected: dict
    run: Callable[[Context], tuple[dict, list[str]]]


def _row_quadratic(d, p, a, **kw):
    def run(ctx: Context):
        res = quadratic_pipeline(QuadraticOrderSpec(d, p, a), **kw, **ctx.kw)
        out = {"elasticity": str(res.elasticity)}
        for key in ("L", "unit_index", "h_prime", "cyclicity"):
            if key in res.trace:
                out[key] = res.trace[key]
        return out, res.notes

    return run


def _row_quartic(ctx: Context):
    data = OrderClassData.from_rep(cyclic(6), [(0,), (2,), (4,)], (1,), 2, conductor_principal=True)
    rho, _ = elasticity_of_order(data, **ctx.kw)
    return {"elasticity": str(rho)}, []


def _row_79(ctx: Context):
    res = quadratic_pipeline(QuadraticOrderSpec(79, 79, 1), **ctx.kw)
    h, h_prime = res.trace["h"], res.trace["h_prime"]
    # the same order seen with conductor P^2 for P = (sqrt 79) principal
    G = cyclic(h)
    data = OrderClassData.from_rep(G, [G.zero], G.zero, 2, conductor_principal=True)
    rho_max = Fraction(small_rel_davenport(G, G.elements, **ctx.kw).rel_davenport, 2)
    rho_section = elasticity_prime_conductor(data, **ctx.kw)
    if rho_section != res.elasticity:
        raise InvariantViolation(f"two routes disagree: {rho_section} vs {res.elasticity}")
    out = {
        "elasticity": str(res.elasticity),
        "locally_associated": locally_associated_numeric_test(h_prime, h),
        "counterexample_condition": counterexample_condition(data, rho_max),
        "rho_maximal": str(rho_max),
    }
    notes = res.notes + ["R is not associated: R meets (sqrt 79) in the conductor P^2, not P"]
    return out, notes


def _row_monotonicity(ctx: Context):
    rep = monotonicity_check(QuadraticOrderSpec(2, 3, 1), 2, **ctx.kw)
    return {"rho_small": str(rep.small.elasticity), "rho_large": str(rep.large.elasticity), "strict": rep.strict}, []


GOLDEN = [
    GoldenRow("z2sqrt2", "Z[2 sqrt 2]", {"elasticity": "3/2"}, _row_quadratic(2, 2, 1)),
    GoldenRow("z9sqrt2", "Z[9 sqrt 2]", {"elasticity": "2"}, _row_quadratic(2, 3, 2)),
    GoldenRow("quartic", "Z6, ker {0,2,4}, [P] nontrivial, a=2", {"elasticity": "4"}, _row_quartic),
    GoldenRow(
        "z79sqrt79",
        "Z[79 sqrt 79]",
        {"elasticity": "3/2", "locally_associated": True, "counterexample_condition": True},
        _row_79,
    ),
    GoldenRow(
        "d987",
        "Q(sqrt 987), n = 3^8, h = 4",
        {"elasticity": "27/2", "L": 6561, "unit_index": 2187, "h_prime": 12, "cyclicity": "cyclic"},
        _row_quadratic(987, 3, 8, h=4),
    ),
    GoldenRow(
        "monotonicity",
        "d=2, p=3: a=1 below b=2",
        {"rho_small": "1", "rho_large": "2", "strict": True},
        _row_monotonicity,
    ),
]


def cmd_reproduce(args, ctx: Context, rep: RunReport) -> None:
    rows = GOLDEN
    if args.only:
        keys = {r.key for r in GOLDEN}
        unknown = [k for k in args.only if k not in keys]
        if unknown:
            raise jsonio.InvalidArgumentError(f"unknown rows {unknown}; choose from {sorted(keys)}")
        rows = [r for r in GOLDEN if r.key in args.only]
    results, passed = [], 0
    for row in rows:
        try:
            got, notes = row.run(ctx)
            error = None
        except ReldavError as exc:
            got, notes, error = {}, [], f"{type(exc).__name__}: {exc}"
        ok = error is None and all(got.get(k) == v for k, v in row.expected.items())
        passed += ok
        results.append(
            {"row": row.key, "label": row.label, "verdict": "PASS" if ok else "FAIL",
             "expected": row.expected, "got": got, "notes": notes, "error": error}
        )
        shown = ", ".join(f"{k}={got.get(k, '?')}" for k in row.expected)
        rep.lines.append(f"{'PASS' if ok else 'FAIL'}  {row.key:<13} {shown}" + (f"  [{error}]" if error else ""))
        rep.notes.extend(f"{row.key}: {n}" for n in notes)
    rep.inputs = {"only": args.only or None}
    rep.outputs = {"rows": results, "passed": passed, "total": len(rows)}
    rep.lines.append(f"{passed}/{len(rows)} PASS")
    if passed != len(rows):
        rep.exit_code = EXIT_FAIL


# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reldav", description="Relative Davenport constants and elasticity of orders.")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps (default 1)")
    p.add_argument("--no-cache", action="store_true", help=f"ignore the memo cache (default {default_cache_path()})")
    p.add_argument("--max-group-order", type=int, default=MAX_GROUP_ORDER, help="size guard for exhaustive search")
    p.add_argument("--json", action="store_true", help="print the full machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("davenport", help="D(G), or D_S(G) with --subset")
    s.add_argument("--group", required=True, help='group spec, e.g. \'[2,6]\' or \'{"invariant_factors":[2,6]}\'')
    s.add_argument("--subset", help="JSON array of elements")
    s.set_defaults(func=cmd_davenport)

    s = sub.add_parser("srel", help="small relative Davenport constant d_S(G) with a witness")
    s.add_argument("--group", required=True)
    s.add_argument("--subset", required=True)
    s.set_defaults(func=cmd_srel)

    s = sub.add_parser("conjectures", help="run both conjecture checkers over a range of groups")
    s.add_argument("--max-order", type=int)
    s.add_argument("--family", help="e.g. Z2xZ2k or Zk")
    s.add_argument("--k-max", type=int, default=4)
    s.set_defaults(func=cmd_conjectures)

    s = sub.add_parser("elasticity-order", help="elasticity from class-group data (JSON, @file or -)")
    s.add_argument("input")
    s.set_defaults(func=cmd_elasticity_order)

    s = sub.add_parser("elasticity-quadratic", help="elasticity of Z[p^a alpha] in Q(sqrt d) (JSON, @file or -)")
    s.add_argument("input")
    s.set_defaults(func=cmd_elasticity_quadratic)

    s = sub.add_parser("reproduce-paper", help="recompute the worked examples and print PASS/FAIL rows")
    s.add_argument("--only", nargs="+", metavar="ROW", help=" ".join(r.key for r in GOLDEN))
    s.set_defaults(func=cmd_reproduce)
    return p


def run(argv: list[str]) -> RunReport:
    """Parse and execute; never raises for user errors, the exit code says what happened."""
    args = build_parser().parse_args(argv)
    rep = RunReport(command=list(argv), as_json=args.json)
    if args.jobs < 1:
        rep.lines, rep.exit_code = ["error: --jobs must be at least 1"], EXIT_INPUT
        return rep
    cache = None if args.no_cache else DavenportCache(default_cache_path())
    ctx = Context(args.jobs, cache, args.max_group_order)
    start = time.perf_counter()
    try:
        args.func(args, ctx, rep)
    except GroupTooLargeError as exc:
        rep.lines, rep.exit_code = [f"error: {exc}"], EXIT_TOO_LARGE
    except UnsupportedCaseError as exc:
        rep.lines, rep.exit_code = [f"error: {exc}"], EXIT_UNSUPPORTED
    except InvariantViolation:
        raise
    except (ReldavError, OSError) as exc:
        rep.lines, rep.exit_code = [f"error: {exc}"], EXIT_INPUT
    rep.seconds = time.perf_counter() - start
    if cache is not None:
        rep.cache = cache.stats()
        if cache.skipped:
            rep.notes.append(f"{cache.skipped} corrupted cache lines skipped")
    return rep


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    rep = run(argv)
    if rep.as_json:
        print(jsonio.dumps(rep.to_json()))
    else:
        stream = sys.stderr if rep.exit_code in (EXIT_INPUT, EXIT_TOO_LARGE, EXIT_UNSUPPORTED) else sys.stdout
        for line in rep.lines:
            print(line, file=stream)
        for note in rep.notes:
            print(f"note: {note}", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
