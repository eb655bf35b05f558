"""One check per acceptance criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary by conftest.py.
"""

import json
import random
import time
from fractions import Fraction
import pytest

from oracles import has_zero_sum, has_zero_sum_by_subsums, minimal_n_D, naive_d
from reldav.cli import main
from reldav.elasticity import (
    OrderClassData,
    d_coset_of_power,
    elasticity_prime_conductor,
    locally_associated_numeric_test,
    simpler_formula_if_dominant,
)
from reldav.errors import PreconditionError
from reldav.groups import all_subgroups, coset_of, cyclic, make_group, make_subgroup, negate_set, preimage, quotient
from reldav.quadratic import QuadraticOrderSpec, Splitting
from reldav.quadratic.engine import elasticity_Rn, elasticity_Rn_cyclic, monotonicity_check, quadratic_pipeline
from reldav.zerosum import (
    check_conjecture_generator_all,
    check_conjecture_subgroup_difference,
    cyclic_small_rel_coset,
    davenport,
    groups_up_to,
    rel_davenport,
    skalba_relative,
    small_rel_davenport,
)


# 1. golden examples

def _z2sqrt2():
    rho = quadratic_pipeline(QuadraticOrderSpec(2, 2, 1)).elasticity
    return rho == Fraction(3, 2), f"rho={rho}"


def _z9sqrt2():
    rho = quadratic_pipeline(QuadraticOrderSpec(2, 3, 2)).elasticity
    return rho == 2, f"rho={rho}"


def _quartic():
    data = OrderClassData.from_rep(cyclic(6), [(0,), (2,), (4,)], (1,), 2)
    rho = elasticity_prime_conductor(data)
    return rho == 4 and data.conductor_principal and not data.p_principal, f"rho={rho}"


def _d987():
    res = quadratic_pipeline(QuadraticOrderSpec(987, 3, 8), h=4)
    t = res.trace
    got = (t["L"], t["unit_index"], t["h_prime"], t["cyclicity"], res.elasticity)
    return got == (6561, 2187, 12, "cyclic", Fraction(27, 2)), "L={}, unit_index={}, h'={}, {}, rho={}".format(*got)


def _z79sqrt79():
    res = quadratic_pipeline(QuadraticOrderSpec(79, 79, 1))
    la = locally_associated_numeric_test(res.trace["h_prime"], res.trace["h"])
    return la and res.elasticity == Fraction(3, 2), f"locally_associated={la}, rho={res.elasticity}"


GOLDEN_CHECKS = {"z2sqrt2": _z2sqrt2, "z9sqrt2": _z9sqrt2, "quartic": _quartic, "d987": _d987, "z79sqrt79": _z79sqrt79}


@pytest.mark.parametrize("row", list(GOLDEN_CHECKS))
def test_criterion_1_golden(row, verdict):
    start = time.perf_counter()
    ok, detail = GOLDEN_CHECKS[row]()
    seconds = time.perf_counter() - start
    verdict(f"1.{row}", ok and seconds < 10, detail)
    assert ok, detail
    assert seconds < 10


# 2. closed forms against exhaustive search

def test_criterion_2_closed_forms(verdict):
    start = time.perf_counter()
    # the trivial group has no coordinates, so it is checked on its own
    mismatches = [] if (cyclic_small_rel_coset(1, 1, 1), skalba_relative(1, 0)) == (0, 1) else [("trivial",)]
    cases = 2
    for n in range(2, 25):
        G = cyclic(n)
        for m in (m for m in range(1, n + 1) if n % m == 0):
            H = make_subgroup(G, [(k % n,) for k in range(0, n, m)])
            for g in range(1, m + 1):
                cases += 1
                exhaustive = small_rel_davenport(G, coset_of(G, (g % n,), H)).value
                if cyclic_small_rel_coset(n, m, g) != exhaustive:
                    mismatches.append(("coset", n, m, g))
    # Skalba's constant is d_{a} for a != 0 and D(Z_n) for a = 0
    for n in range(2, 17):
        G = cyclic(n)
        for a in range(n):
            cases += 1
            exhaustive = davenport(G) if a == 0 else small_rel_davenport(G, [(a,)]).value
            if skalba_relative(n, a) != exhaustive:
                mismatches.append(("skalba", n, a))
    # the small end once more against the package-independent oracles
    for n in range(2, 11):
        for a in range(n):
            cases += 1
            oracle = minimal_n_D((n,), [(s,) for s in range(n)]) if a == 0 else naive_d((n,), [(a,)])[0]
            if skalba_relative(n, a) != oracle:
                mismatches.append(("skalba-oracle", n, a))
    seconds = time.perf_counter() - start
    verdict("2", not mismatches and seconds < 300, f"{cases} cases, {len(mismatches)} mismatches")
    assert not mismatches
    assert seconds < 300


# 3. structural identities

def _nonempty_subsets(G):
    els = G.elements
    for mask in range(1, 1 << len(els)):
        yield [els[i] for i in range(len(els)) if mask >> i & 1]


def _structural_failures(G, subsets, quotient_checks):
    bad = []
    D = davenport(G)
    free = {}  # witnesses repeat across subsets; verify each once
    for S in subsets:
        r = small_rel_davenport(G, S)
        if r.rel_davenport != r.value + 1 or r.rel_davenport > D:
            bad.append(("bound", S))
        if small_rel_davenport(G, negate_set(G, S)).value != r.value:
            bad.append(("negation", S))
        if r.witness is not None:
            if r.witness not in free:
                check = has_zero_sum if len(r.witness) <= 12 else has_zero_sum_by_subsums
                free[r.witness] = not check(G.invariant_factors, r.witness)
            if G.sum(r.witness) not in set(S) or not free[r.witness]:
                bad.append(("witness", S))
        for x in G.elements[:4]:
            if x not in S and small_rel_davenport(G, S + [x]).value < r.value:
                bad.append(("monotone", S, x))
    for H, Sq in quotient_checks:
        Q, pi = quotient(G, H)
        if small_rel_davenport(Q, Sq).value > small_rel_davenport(G, preimage(pi, Sq)).value:
            bad.append(("quotient", H, Sq))
    return bad


def test_criterion_3_structural(verdict):
    bad, cases = [], 0
    for G in groups_up_to(12):
        subsets = list(_nonempty_subsets(G))
        qchecks = []
        for H in all_subgroups(G):
            Q, _ = quotient(G, H)
            qchecks += [(H, Sq) for Sq in _nonempty_subsets(Q)]
        cases += len(subsets) + len(qchecks)
        bad += _structural_failures(G, subsets, qchecks)
        # D_S from its minimal-n definition, for the small groups
        if G.order <= 8:
            for S in subsets:
                if rel_davenport(G, S) != minimal_n_D(G.invariant_factors, S):
                    bad.append(("definition", G, S))
    rng = random.Random(20240601)
    for G in groups_up_to(24):
        if G.order <= 12:
            continue
        els = G.elements
        subsets = [rng.sample(els, rng.randint(1, len(els))) for _ in range(40)]
        qchecks = []
        for H in all_subgroups(G):
            Q, _ = quotient(G, H)
            qchecks += [(H, rng.sample(Q.elements, rng.randint(1, Q.order))) for _ in range(3)]
        cases += len(subsets) + len(qchecks)
        bad += _structural_failures(G, [sorted(S) for S in subsets], qchecks)
    verdict("3", not bad, f"{cases} cases (exhaustive to order 12, sampled to 24), {len(bad)} failures")
    assert not bad


# 4. conjecture checkers

CYCLIC_30 = [cyclic(n) for n in range(1, 31)]
NON_CYCLIC = [make_group(f) for f in ([2, 2], [2, 4], [3, 3], [2, 6])]


def test_criterion_4_generator_cyclic(verdict):
    reports = [check_conjecture_generator_all(G) for G in CYCLIC_30]
    cases = sum(r.cases_checked for r in reports)
    bad = [r.group for r in reports if not r.holds]
    verdict("4.generator", not bad, f"cyclic orders 1..30, {cases} cases, violations in {len(bad)} groups")
    assert not bad


def _subgroup_difference_cyclic():
    return [check_conjecture_subgroup_difference(G) for G in CYCLIC_30]


def test_criterion_4_subgroup_difference_cyclic_record(verdict):
    # The required zero-violation outcome is unattainable: the inequality fails
    # for every even order (smallest case Z2, H1 = 0, H2 = Z2, g = 1), and the
    # oracle in test_zerosum confirms each violation.  Record it honestly.
    reports = _subgroup_difference_cyclic()
    bad = [r.group.order for r in reports if not r.holds]
    verdict(
        "4.subgroup_difference",
        not bad,
        f"cyclic orders 1..30, violations at orders {bad} (genuine counterexamples, criterion unattainable)",
    )
    assert bad == [n for n in range(2, 31, 2)]
    # the restriction actually used elsewhere, g in H1, is clean
    assert not [v for r in reports for v in r.violations if v["g"] in v["H1"]]


@pytest.mark.xfail(strict=True, reason="subgroup-difference inequality is false on even cyclic groups")
def test_criterion_4_subgroup_difference_cyclic_zero_violations():
    assert all(r.holds for r in _subgroup_difference_cyclic())


def test_criterion_4_non_cyclic_complete(verdict):
    rows = []
    for G in NON_CYCLIC:
        gen, dif = check_conjecture_generator_all(G), check_conjecture_subgroup_difference(G)
        rows.append(f"{G.invariant_factors}: gen {len(gen.violations)}/{gen.cases_checked}, "
                    f"diff {len(dif.violations)}/{dif.cases_checked}")
    verdict("4.non_cyclic", True, "completed; " + "; ".join(rows))


# 5. theorem-level consistency

def _random_admissible(rng, groups):
    G = rng.choice(groups)
    H = rng.choice(all_subgroups(G))
    rep = rng.choice(G.elements)
    data = OrderClassData.from_rep(G, H.elements, rep, 1)
    a = data.p_order * rng.randint(1, max(1, 6 // data.p_order))
    return OrderClassData.from_rep(G, H.elements, rep, a)


IMAGINARY_SET = [QuadraticOrderSpec(d, p, a) for d in (-7, -11, -15, -19, -23) for p in (2, 3) for a in (1, 2)]


def test_criterion_5_consistency(verdict):
    rng = random.Random(5)
    groups = [G for G in groups_up_to(24)]
    out_of_range = 0
    for _ in range(500):
        data = _random_admissible(rng, groups)
        rho = elasticity_prime_conductor(data).value
        D = Fraction(davenport(data.clR), 2)
        out_of_range += not (D <= rho < D + Fraction(3, 2))

    simpler_checked = refused = disagree = 0
    for G in groups_up_to(16):
        for H in all_subgroups(G):
            Q, pi = quotient(G, H)
            for q in Q.elements:
                rep = next(x for x in G.elements if pi(x) == q)
                for a in range(1, 5):
                    if Q.mul(a, q) != Q.zero:
                        continue
                    data = OrderClassData.from_rep(G, H.elements, rep, a)
                    try:
                        simple = simpler_formula_if_dominant(data)
                    except PreconditionError:
                        refused += 1
                        d_P = d_coset_of_power(data, 1)
                        assert any(d_coset_of_power(data, i) > d_P for i in range(data.p_order))
                        continue
                    simpler_checked += 1
                    disagree += simple != elasticity_prime_conductor(data)

    engine_bad = []
    for spec in IMAGINARY_SET:
        res = quadratic_pipeline(spec)
        if spec.splitting is Splitting.SPLIT:
            continue
        if res.elasticity < spec.a:
            engine_bad.append(spec)
        top = res.trace["ladder"]["cl_Rn"]["invariant_factors"]
        if len(top) <= 1:
            cyc = elasticity_Rn_cyclic(res.trace["h"], res.trace["h_prime"], spec.a, spec.splitting, res.trace.get("p_principal"))
            if cyc != elasticity_Rn(spec).elasticity:
                engine_bad.append(spec)

    mono = [monotonicity_check(QuadraticOrderSpec(2, 3, 1), 2), monotonicity_check(QuadraticOrderSpec(987, 3, 1), 8, h=4)]
    mono_ok = all(m.small.elasticity <= m.large.elasticity for m in mono)

    ok = not out_of_range and not disagree and not engine_bad and mono_ok
    verdict(
        "5",
        ok,
        f"500 random inputs, {out_of_range} out of range; simpler formula {simpler_checked} agree checks, "
        f"{refused} refusals, {disagree} disagreements; {len(IMAGINARY_SET)} imaginary specs, "
        f"{len(engine_bad)} engine problems; monotonicity "
        + ", ".join(f"{m.small.elasticity}<{m.large.elasticity}" for m in mono),
    )
    assert ok


# 6. determinism

def _json_run(capsys, monkeypatch, tmp_path, tag, *argv):
    monkeypatch.setenv("RELDAV_CACHE", str(tmp_path / f"{tag}.cache"))
    main(["--json", *argv])
    rep = json.loads(capsys.readouterr().out)
    rep.pop("runtime")
    rep["command"] = [x for x in rep["command"] if x not in ("--jobs", "1", "8")]
    return json.dumps(rep, sort_keys=True)


def test_criterion_6_determinism(capsys, monkeypatch, tmp_path, verdict):
    commands = [
        ["conjectures", "--max-order", "16"],
        ["reproduce-paper"],
        ["elasticity-quadratic", '{"d":-23,"p":3,"a":2}'],
    ]
    same = True
    for i, cmd in enumerate(commands):
        outs = {
            _json_run(capsys, monkeypatch, tmp_path, f"{i}-{tag}", "--jobs", jobs, *cmd)
            for tag, jobs in (("a", "1"), ("b", "8"), ("c", "1"))
        }
        # the warm cache must not change anything either
        outs.add(_json_run(capsys, monkeypatch, tmp_path, f"{i}-c", "--jobs", "8", *cmd))
        same &= len(outs) == 1
    verdict("6", same, f"{len(commands)} commands identical across --jobs 1/8, repeat runs and a warm cache")
    assert same
