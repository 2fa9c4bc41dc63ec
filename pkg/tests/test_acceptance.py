"""Acceptance gate: the eleven headline properties, each with its time bound.

Each test records one verdict line; conftest's terminal-summary hook
prints them after the run so the log always shows one pass/fail line per
criterion.  The criteria run in order in one process; later ones reuse
towers memoized by earlier ones, exactly as a catalog run through the
CLI would.
"""

import json
import math
import subprocess
import sys
import time
from dataclasses import replace

from lawcheck.kernel import BOOL, Config, SumCarrier
from lawcheck.codensity import (
    check_codensity_lifting,
    check_from_roundtrip,
    check_slifting_agreement,
)
from lawcheck.hierarchy import check_backtracking_semantics, check_run_equations
from lawcheck.fastproduct import check_fast_product_correct
from lawcheck.lifting import alifting, check_algebraic_lifting, check_psi_phi_roundtrip
from lawcheck.models import (
    ALGEBRAIC_OPS,
    NON_ALGEBRAIC_OPS,
    algebraicity_check,
    base_monad,
    output_operation_swapped,
    sigma_operation,
)
from lawcheck.suites import MUTANT_TARGETS, run_suite
from lawcheck.transformers import coincidence_state_t_identity, transformer

CFG = Config()

VERDICT_LINES = []


def _verdict(n, ok, dt, bound, note):
    line = (f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {note}"
            f"  ({dt:.1f}s, bound {bound}s)")
    VERDICT_LINES.append(line)
    print(line)
    assert ok, line
    assert dt < bound, line


def test_criterion_01_monad_laws_for_all_bases_and_codensity():
    t0 = time.perf_counter()
    suites = [f"monad-laws/{n}" for n in
              ("identity", "state", "except", "list", "output", "env", "cont",
               "codensity-identity", "codensity-state", "codensity-except")]
    reports = [r for sid in suites for r in run_suite(sid, CFG)]
    dt = time.perf_counter() - t0
    core = [r for r in reports if r.law_id.split(".")[-1] in
            ("left-unit", "right-unit", "assoc")]
    ok = len(core) == 30 and all(r.passed for r in reports)
    _verdict(1, ok, dt, 30, f"monad laws, {len(reports)} reports over 10 monads")


def test_criterion_02_lift_morphism_laws_for_all_transformers():
    t0 = time.perf_counter()
    suites = [f"morphism-laws/{t}" for t in
              ("stateT", "exceptT", "envT", "outputT", "contT", "codensityT")]
    reports = [r for sid in suites for r in run_suite(sid, CFG)]
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in reports) and len(reports) == 6 * 7 * 3
    _verdict(2, ok, dt, 60, f"lift preserves ret/bind, {len(reports)} reports")


def test_criterion_03_algebraicity_classification():
    t0 = time.perf_counter()
    verdicts = {name: algebraicity_check(sigma_operation(name, CFG), CFG)
                for name in ALGEBRAIC_OPS + NON_ALGEBRAIC_OPS}
    swapped = algebraicity_check(output_operation_swapped(CFG), CFG)
    dt = time.perf_counter() - t0
    ok = (
        all(verdicts[n].verdict == "algebraic" for n in ALGEBRAIC_OPS)
        and all(verdicts[n].verdict == "counterexample"
                and verdicts[n].counterexample is not None
                for n in NON_ALGEBRAIC_OPS)
        and swapped.verdict == "counterexample"
    )
    _verdict(3, ok, dt, 30,
             "get/put/fail/output/ask/abort algebraic; "
             "flush/local/handle and swapped output refuted")


def test_criterion_04_algebraic_lifting_theorem():
    t0 = time.perf_counter()
    reports = check_algebraic_lifting(CFG)
    ok = all(r.passed for r in reports) and len(reports) == 5 * 6 * 4

    # the lifted get coincides pointwise with the transformed monad's get
    get = sigma_operation("get", CFG)
    lift = transformer("exceptT", CFG).lift(get.monad)
    lifted = alifting(get, lift, CFG)
    n = lift.dst
    pointwise = 0
    for a in CFG.law_types(2):
        direct = get.at(SumCarrier(BOOL, a, CFG))
        na = n.obj(a)
        kf = na.key
        for t in lifted.sig.obj(na).enum()[:200]:
            ok = ok and kf(lifted.at(a)(t)) == kf(direct(t))
            pointwise += 1
    ok = ok and pointwise > 0

    deep = check_algebraic_lifting(replace(CFG, deep_diagrams=True))
    squares = [r for r in deep if ".deep." in r.law_id]
    ok = ok and squares and all(r.passed for r in deep)
    dt = time.perf_counter() - t0
    _verdict(4, ok, dt, 60,
             f"lifting cells pass, get identity at {pointwise} points, "
             f"{len(squares)} deep squares")


def test_criterion_05_phi_psi_roundtrip():
    t0 = time.perf_counter()
    reports = check_psi_phi_roundtrip(CFG)
    dt = time.perf_counter() - t0
    gap = next(r for r in reports if r.law_id == "prop17.local-distinct")
    ok = all(r.passed for r in reports) and gap.witness is not None
    _verdict(5, ok, dt, 15, "psi(phi(op)) = op; local's gap witnessed")


def test_criterion_06_codensity_lifting_including_non_algebraic():
    t0 = time.perf_counter()
    lifted = check_codensity_lifting(CFG)
    roundtrip = check_from_roundtrip(CFG)
    dt = time.perf_counter() - t0
    ids = {r.law_id for r in lifted}
    ok = (
        all(r.passed for r in lifted + roundtrip)
        and "thm27.exceptT.local.coherence" in ids
        and len(roundtrip) == 9
    )
    _verdict(6, ok, dt, 120,
             f"{len(lifted)} lifting reports incl. local/exceptT; "
             f"{len(roundtrip)} roundtrips")


def test_criterion_07_slifting_agrees_with_alifting():
    t0 = time.perf_counter()
    reports = check_slifting_agreement(CFG)
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in reports) and len(reports) == 6 * 4
    _verdict(7, ok, dt, 60, f"agreement on {len(reports)} algebraic cells")


def test_criterion_08_statet_identity_coincidence_exhaustive():
    t0 = time.perf_counter()
    reports = coincidence_state_t_identity(
        replace(CFG, law_cases=10**6), types=CFG.law_types(2), cap=10**6,
    )
    dt = time.perf_counter() - t0
    ok = all(r.passed and r.mode == "exhaustive" for r in reports)
    _verdict(8, ok, dt, 10, "ret/bind/get/put coincide, fully enumerated")


def test_criterion_09_run_state_equations_and_backtracking():
    t0 = time.perf_counter()
    reports = run_suite("runstatet", CFG)
    dt = time.perf_counter() - t0
    ok = (
        len(reports) == 7
        and all(r.passed and r.mode == "exhaustive" for r in reports)
    )
    _verdict(9, ok, dt, 10,
             "six run equations exhaustive at two-point types; "
             "handler sees the pre-catch state")


def test_criterion_10_fast_product_sweep():
    t0 = time.perf_counter()
    report = check_fast_product_correct(CFG, max_len=4, max_elem=3)
    dt = time.perf_counter() - t0
    lists = sum(4 ** k for k in range(5))
    states = 3 ** 4 + 1
    ok = (
        report.passed
        and report.mode == "exhaustive"
        and report.cases == lists * states
    )
    _verdict(10, ok, dt, 20,
             f"product of every list (len<=4, elems 0..3) from "
             f"{states} states, {report.cases} cases")


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "lawcheck.cli", *argv],
        capture_output=True, text=True,
    )


def test_criterion_11_mutation_sensitivity_via_cli(tmp_path):
    t0 = time.perf_counter()
    ok = True
    caught = []
    for name, target in sorted(MUTANT_TARGETS.items()):
        first = tmp_path / f"{name}.json"
        r = _cli("--mutant", name, "--suite", target, "--quick",
                 "--format", "json", "--out", str(first))
        with open(first) as fh:
            doc1 = json.load(fh)
        failed1 = {e["id"]: e for e in doc1["suites"] if e["outcome"] == "fail"}
        ok = ok and r.returncode == 1 and bool(failed1)
        ok = ok and all(e.get("witness") is not None for e in failed1.values())

        second = tmp_path / f"{name}.replay.json"
        r2 = _cli("--replay", str(first), "--format", "json",
                  "--out", str(second))
        with open(second) as fh:
            doc2 = json.load(fh)
        twins = {e["id"]: e for e in doc2["suites"]}
        ok = ok and r2.returncode == 1
        for lid, entry in failed1.items():
            twin = twins.get(lid)
            ok = ok and twin is not None and twin.get("witness_match") is True
            ok = ok and json.dumps(twin.get("witness"), sort_keys=True) == \
                json.dumps(entry.get("witness"), sort_keys=True)
        caught.append(f"{name}->{sorted(failed1)[0]}")
    dt = time.perf_counter() - t0
    _verdict(11, ok, dt, 900, "; ".join(caught))
