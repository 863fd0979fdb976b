"""Acceptance gate: one check per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python -m tests.test_acceptance``.
"""

import itertools
import random
import time

import pytest

from ternlab.chains import ChainVector, boundary, in_degenerate_span, is_degenerate
from ternlab.diagram import brute_force_colorings, enumerate_colorings, load_diagram, verify_cycle
from ternlab.homology import (
    TERN,
    ComplexSelector,
    HomologyGroup,
    build_matrix,
    cycle_class,
    homology_groups,
    smith_normal_form,
)
from ternlab.invariants import Cochain, check_cocycle, load_cochain, pair, state_sum
from ternlab.tern import (
    axiom_holds_at,
    check_axioms,
    cyclic_group,
    enumerate_terns,
    is_ternary_quasigroup,
    make_affine,
    make_group_tern,
    symmetric_group,
)

from . import identities, oracles
from .test_cli import DATA
from .test_homology import SELECTORS, bounds_multiple, det, matmul, random_matrix
from .test_invariants import CHI_TERMS, oracle_is_cocycle

SEED = 20240611
RESULTS: dict[int, tuple[bool, str]] = {}

TREFOIL_CYCLE = ChainVector(1, {(0, 1, 2): 1, (0, 2, 2): 1, (0, 0, 2): 1})
STATE_SUM_GOLDEN = [9, 18, 0]


def criterion_1():
    start = time.perf_counter()
    bad = [n for n in range(1, 13) if not (check_axioms(make_affine(n)) and is_ternary_quasigroup(make_affine(n)))]
    for g in (cyclic_group(6), symmetric_group(3)):
        if not check_axioms(make_group_tern(g)):
            bad.append(f"group of order {g.order}")
    witnesses = {}
    s3 = symmetric_group(3)
    for variant, holds, breaks in (("a^-1*b*c", "A3R", "A3L"), ("a*b*c^-1", "A3L", "A3R")):
        tbl = make_group_tern(s3, variant)
        rep = check_axioms(tbl, (holds, breaks))
        w = rep.results[breaks]
        if not rep.passed(holds) or w is None or axiom_holds_at(tbl, breaks, w):
            bad.append(variant)
        witnesses[variant] = w
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    return (
        ok,
        f"R_1..R_12, Z_6, S_3 pass; witnesses {witnesses}; {elapsed:.2f}s" if ok else f"failures {bad}, {elapsed:.2f}s",
    )


def criterion_2():
    start = time.perf_counter()
    failures = {}
    checked = 0
    for q in (2, 3):
        for tbl in enumerate_terns(q):
            for n in range(5):
                gens = list(identities.exhaustive(q, n))
                checked += len(gens)
                for name, bad in identities.run_all(tbl, gens).items():
                    failures[name] = failures.get(name, 0) + len(bad)
    sampled = 0
    for g in (symmetric_group(3), cyclic_group(6)):
        tbl = make_group_tern(g)
        for n in range(5):
            gens = list(identities.sampled(6, n, 2000, SEED + n))
            sampled += len(gens)
            for name, bad in identities.run_all(tbl, gens).items():
                failures[name] = failures.get(name, 0) + len(bad)
    elapsed = time.perf_counter() - start
    total = sum(failures.values())
    ok = total == 0 and elapsed < 120
    return (
        ok,
        f"{len(failures)} identities, {checked} exhaustive + {sampled} sampled generators, {total} failures, {elapsed:.1f}s",
    )


def criterion_3():
    bad = []
    count = 0
    for q in (3, 4):
        tbl = make_affine(q)
        for n in range(4):
            for x in itertools.product(range(q), repeat=n + 2):
                if not is_degenerate(x):
                    continue
                count += 1
                for v in ("L", "R", "full"):
                    if not in_degenerate_span(boundary(tbl, v, x)):
                        bad.append((q, v, x))
    return not bad, f"{count} degenerate generators, {len(bad)} failures"


def criterion_4():
    bad = 0
    count = 0
    for tbl in (make_affine(3), make_group_tern(symmetric_group(3))):
        for n in (1, 2, 3):
            for x in itertools.product(range(tbl.order), repeat=n + 2):
                count += 1
                bad += boundary(tbl, "full", x).terms != oracles.displayed_boundary(tbl, x)
    return bad == 0, f"{count} inputs, {bad} discrepancies"


def criterion_5():
    start = time.perf_counter()
    r3 = make_affine(3)
    h1 = homology_groups(r3, 1, TERN)[1]
    cyc = bool(verify_cycle(None, r3, TREFOIL_CYCLE))
    k = cycle_class(r3, TREFOIL_CYCLE)
    # independent: k z bounds exactly when k is a multiple of 3
    cross = [bounds_multiple(r3, TREFOIL_CYCLE, j) for j in (1, 2, 3)] == [False, False, True]
    elapsed = time.perf_counter() - start
    ok = 3 in h1.torsion and cyc and k == 3 and cross and elapsed < 30
    return ok, f"H_1 = {h1}, cycle {cyc}, class order {k}, oracle agrees {cross}, {elapsed:.2f}s"


def criterion_6():
    d = load_diagram(DATA / "trefoil.json")
    r3 = make_affine(3)
    fast = enumerate_colorings(d, r3)
    slow = brute_force_colorings(d, r3)
    same = sorted(tuple(sorted(c.items())) for c in fast) == sorted(tuple(sorted(c.items())) for c in slow)
    one = len(enumerate_colorings(d, make_affine(1)))
    ok = len(fast) == 27 and same and one == 1
    return (
        ok,
        f"{len(fast)} colorings, brute force {len(slow)} ({3 ** len(d.regions)} assignments), one-element tern {one}",
    )


def criterion_7():
    r3 = make_affine(3)
    phi = load_cochain(DATA / "paper_cocycle.json", 3)
    listed = phi == Cochain.from_terms(3, 3, CHI_TERMS)
    cocycle = bool(check_cocycle(r3, phi)) and oracle_is_cocycle(r3, phi)
    p = pair(phi, TREFOIL_CYCLE)
    d = load_diagram(DATA / "trefoil.json")
    s = state_sum(d, r3, phi)
    ok = listed and cocycle and p == 1 and s.total == 27 and list(s.multiplicities) == STATE_SUM_GOLDEN
    return ok, f"cocycle {cocycle}, pairing {p} mod 3, state sum {s} (total {s.total})"


def criterion_8():
    one = make_affine(1)
    full = homology_groups(one, 4, ComplexSelector("full", "full"))
    norm = homology_groups(one, 4, TERN)
    one_ok = all(g == HomologyGroup(1) for g in full.values()) and all(norm[n].is_trivial() for n in range(1, 5))
    dd_bad = 0
    for q in (2, 3):
        tbl = make_affine(q)
        for sel in SELECTORS:
            for n in range(1, 4):
                dd_bad += any(build_matrix(tbl, n, sel) @ build_matrix(tbl, n + 1, sel))
    rnd = random.Random(SEED)
    snf_bad = 0
    for _ in range(100):
        m, n = rnd.randint(1, 8), rnd.randint(1, 8)
        A = random_matrix(rnd, m, n, density=rnd.choice([0.3, 0.6, 1.0]), spread=rnd.choice([2, 9, 50]))
        snf = smith_normal_form(A, transforms=True)
        D = matmul(matmul(snf.U(), A), snf.V())
        want = [[snf.divisors[i] if i == j and i < snf.rank else 0 for j in range(n)] for i in range(m)]
        snf_bad += D != want or abs(det(snf.U())) != 1 or abs(det(snf.V())) != 1
    ok = one_ok and dd_bad == 0 and snf_bad == 0
    return ok, f"one-element tern {one_ok}, dd nonzero in {dd_bad} cases, SNF failures {snf_bad}/100"


CRITERIA = {
    1: ("axiom suite", criterion_1),
    2: ("face identities", criterion_2),
    3: ("degeneracy closure", criterion_3),
    4: ("low degree expansions", criterion_4),
    5: ("trefoil class in H_1", criterion_5),
    6: ("coloring oracle", criterion_6),
    7: ("cocycle and state sum", criterion_7),
    8: ("homology sanity", criterion_8),
}


def line(k):
    ok, detail = RESULTS[k]
    return f"criterion {k} [{'PASS' if ok else 'FAIL'}] {CRITERIA[k][0]}: {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    try:
        RESULTS[k] = CRITERIA[k][1]()
    except Exception as exc:  # noqa: BLE001  report, then fail
        RESULTS[k] = (False, f"raised {exc!r}")
    print(line(k))
    assert RESULTS[k][0], line(k)


if __name__ == "__main__":
    for k in sorted(CRITERIA):
        RESULTS[k] = CRITERIA[k][1]()
        print(line(k), flush=True)
    raise SystemExit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
