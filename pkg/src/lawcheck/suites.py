"""Suite registry: every law family under a stable, glob-selectable id.

A suite is a named runner from a config to law reports.  Report ids are
namespaced by the suite id (runners that label their own reports already
emit the prefix; anything else gets it prepended), so a failed report
maps back to the suite that owns it and a replay can re-run exactly the
suites that failed.

Construction failures inside a suite (a monad or morphism refusing to
build because its own laws failed) surface as a single fail report
carrying the construction witness rather than as a crash; that is the
path mutated definitions are expected to take.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import hierarchy as hr
from . import lifting as lf
from .codensity import (
    check_codensity_lifting,
    check_from_roundtrip,
    check_mk_naturality,
    check_slifting_agreement,
    codensity as codensity_monad,
    lift_k,
)
from .fastproduct import check_fast_product_correct, check_rec_behavior
from .kernel import (
    Config,
    LawViolation,
    PreconditionError,
    check_functor_laws,
    check_monad_laws,
    check_naturality,
    identity_functor,
)
from .models import (
    ALGEBRAIC_OPS,
    BASE_MONADS,
    NON_ALGEBRAIC_OPS,
    algebraicity_check,
    base_monad,
    output_operation_swapped,
    sigma_operation,
)
from .report import LawReport, LawRun, witness_bytes
from .transformers import (
    FMTS,
    TRANSFORMERS,
    check_fmt_laws,
    check_monad_morphism,
    coincidence_state_t_identity,
    morphism_pool,
    state_t,
    transformer,
)


class SuiteSelectionError(Exception):
    """A selection pattern matched nothing in the registry."""


@dataclass(frozen=True)
class SuiteDef:
    id: str
    anchor: str
    run: object


SUITES: dict[str, SuiteDef] = {}


def _suite(sid: str, anchor: str):
    def add(fn):
        SUITES[sid] = SuiteDef(sid, anchor, fn)
        return fn
    return add


# kernel-level plumbing

@_suite("functor-laws", "plumbing")
def _run_functor_laws(cfg: Config) -> list[LawReport]:
    reports = []
    for name in BASE_MONADS:
        m = base_monad(name, cfg)
        reports += check_functor_laws(
            m.functor, cfg, label=f"functor-laws.{name}",
        )
    return reports


@_suite("naturality", "plumbing")
def _run_naturality(cfg: Config) -> list[LawReport]:
    reports = []
    for name in BASE_MONADS:
        m = base_monad(name, cfg)
        reports.append(check_naturality(
            identity_functor(), m.functor, lambda a, m=m: m.ret, cfg,
            law_id=f"naturality.ret.{name}", anchor="plumbing",
        ))
    for e in morphism_pool(cfg):
        n = e.as_nat_trans()
        reports.append(check_naturality(
            n.src, n.dst, n.at, cfg,
            law_id=f"naturality.{e.name}", anchor="Sect 3.3",
        ))
    return reports


# monad laws for every registered monad and the checked stacks

def _monad_suite(sid: str, build):
    @_suite(sid, "plumbing")
    def run(cfg: Config, _build=build, _sid=sid) -> list[LawReport]:
        return check_monad_laws(_build(cfg), cfg, label=_sid)
    return run


for _name in BASE_MONADS:
    _monad_suite(f"monad-laws/{_name}",
                 lambda cfg, n=_name: base_monad(n, cfg))

for _name in ("identity", "state", "except"):
    _monad_suite(f"monad-laws/codensity-{_name}",
                 lambda cfg, n=_name: codensity_monad(base_monad(n, cfg), cfg))


def _stack_state_except(cfg: Config):
    from .models import STATE
    return state_t(STATE, cfg).apply(base_monad("except", cfg))


_monad_suite("monad-laws/stack-state-except", _stack_state_except)


# morphism laws: lift for every transformer over every base

def _morphism_suite(sid: str, lift_for):
    @_suite(sid, "Sect 3.3")
    def run(cfg: Config, _lift=lift_for, _sid=sid) -> list[LawReport]:
        reports = []
        for base_name in BASE_MONADS:
            e = _lift(cfg, base_monad(base_name, cfg))
            reports += check_monad_morphism(
                e, cfg, label=f"{_sid}.{base_name}",
            )
        return reports
    return run


for _name in TRANSFORMERS:
    _morphism_suite(f"morphism-laws/{_name}",
                    lambda cfg, base, n=_name: transformer(n, cfg).lift(base))

_morphism_suite("morphism-laws/codensityT",
                lambda cfg, base: lift_k(base, cfg))


for _name in FMTS:
    @_suite(f"fmt-laws/{_name}", "Sect 3.4")
    def _run_fmt(cfg: Config, _n=_name) -> list[LawReport]:
        return check_fmt_laws(transformer(_n, cfg), cfg)


# operation classification and the lifting chain

@_suite("algebraicity", "Sect 3.2")
def _run_algebraicity(cfg: Config) -> list[LawReport]:
    reports = []
    for name in ALGEBRAIC_OPS + (("callcc",) if cfg.enable_callcc else ()):
        ev = algebraicity_check(sigma_operation(name, cfg), cfg)
        reports.append(replace(
            ev.report, law_id=f"algebraicity.{name}", anchor="Sect 3.2",
        ))
    for name in NON_ALGEBRAIC_OPS:
        ev = algebraicity_check(sigma_operation(name, cfg), cfg)
        inner = ev.report
        reports.append(LawReport(
            law_id=f"algebraicity.{name}",
            anchor="Sect 3.2",
            mode=inner.mode,
            cases=inner.cases,
            outcome="pass" if not inner.passed else "fail",
            witness=inner.witness if not inner.passed else {
                "expected": "a bind/continuation counterexample", "found": None,
            },
            ms=inner.ms,
        ))
    swapped = algebraicity_check(output_operation_swapped(cfg), cfg)
    inner = swapped.report
    reports.append(LawReport(
        law_id="algebraicity.output-swapped",
        anchor="Sect 3.2",
        mode=inner.mode,
        cases=inner.cases,
        outcome="pass" if not inner.passed else "fail",
        witness=inner.witness if not inner.passed else {
            "expected": "the pre-fix argument order must fail", "found": None,
        },
        ms=inner.ms,
    ))
    return reports


@_suite("statet-identity", "Sect 3.3")
def _run_statet_identity(cfg: Config) -> list[LawReport]:
    return coincidence_state_t_identity(cfg)


@_suite("prop17", "Prop 17")
def _run_prop17(cfg: Config) -> list[LawReport]:
    return lf.check_psi_phi_roundtrip(cfg)


@_suite("thm19", "Thm 19")
def _run_thm19(cfg: Config) -> list[LawReport]:
    return lf.check_algebraic_lifting(cfg)


@_suite("naturality-mk", "Sect 6.2")
def _run_naturality_mk(cfg: Config) -> list[LawReport]:
    return check_mk_naturality(cfg)


@_suite("prop26", "Prop 26")
def _run_prop26(cfg: Config) -> list[LawReport]:
    return check_from_roundtrip(cfg)


@_suite("thm27", "Thm 27")
def _run_thm27(cfg: Config) -> list[LawReport]:
    return check_codensity_lifting(cfg)


@_suite("prop28", "Prop 28")
def _run_prop28(cfg: Config) -> list[LawReport]:
    return check_slifting_agreement(cfg)


# the interface hierarchy and its example program

@_suite("runstatet", "Sect 4.1")
def _run_runstatet(cfg: Config) -> list[LawReport]:
    model = hr.build_except_state_run_model(cfg, check=False)
    reports = hr.check_run_equations(cfg, model=model)
    reports.append(hr.check_backtracking_semantics(model, cfg))
    return reports


@_suite("hierarchy-inheritance", "Fig 1")
def _run_hierarchy(cfg: Config) -> list[LawReport]:
    return hr.check_hierarchy_inheritance(cfg)


@_suite("fastproduct", "Sect 4.2 / App A.1")
def _run_fastproduct(cfg: Config) -> list[LawReport]:
    return [check_fast_product_correct(cfg), check_rec_behavior(cfg)]


# mutation sensitivity: each seeded regression must be caught and the
# catch must replay byte-identically

MUTANT_TARGETS = {
    "exceptt-bind-swap": "morphism-laws/exceptT",
    "output-order": "algebraicity",
    "catch-no-backtrack": "runstatet",
    "from-rot": "prop26",
    "put-stateless": "runstatet",
}

MUTANTS = tuple(sorted(MUTANT_TARGETS))


@_suite("mutation", "plumbing")
def _run_mutation(cfg: Config) -> list[LawReport]:
    reports = []
    for name in MUTANTS:
        target = MUTANT_TARGETS[name]
        mcfg = replace(cfg, mutants=frozenset({name}))
        run = LawRun(f"mutation.{name}", "plumbing")
        first = run_suite(target, mcfg)
        again = run_suite(target, mcfg)
        failed = [r for r in first if not r.passed]
        failed_again = {r.law_id: r for r in again if not r.passed}
        run.cases = len(first)
        if not failed:
            run.fail({"suite": target, "problem": "no suite failure observed"})
        else:
            for r in failed:
                twin = failed_again.get(r.law_id)
                if twin is None or witness_bytes(twin.witness) != witness_bytes(r.witness):
                    run.fail({
                        "suite": target, "law": r.law_id,
                        "problem": "witness did not replay byte-identically",
                    })
                    break
        report = run.report()
        if report.passed:
            # keep the caught failure visible in the report stream
            report = replace(report, witness={
                "suite": target,
                "failing": [r.law_id for r in failed],
                "witness": failed[0].witness,
            })
        reports.append(report)
    return reports


def suite_ids() -> list[str]:
    return list(SUITES)


def expand_selection(patterns) -> list[str]:
    """Glob patterns to registry ids; a pattern with no match is an error."""
    import fnmatch

    if not patterns:
        return suite_ids()
    chosen: list[str] = []
    for pat in patterns:
        hits = [sid for sid in SUITES if fnmatch.fnmatchcase(sid, pat)]
        if not hits:
            raise SuiteSelectionError(f"no suite matches {pat!r}")
        for sid in hits:
            if sid not in chosen:
                chosen.append(sid)
    return chosen


def _prefixed(sid: str, reports: list[LawReport]) -> list[LawReport]:
    out = []
    for r in reports:
        if not r.law_id.startswith(sid):
            r = replace(r, law_id=f"{sid}.{r.law_id}")
        out.append(r)
    return out


def run_suite(sid: str, cfg: Config) -> list[LawReport]:
    """Execute one suite; construction failures become fail reports."""
    suite = SUITES[sid]
    try:
        reports = suite.run(cfg)
    except LawViolation as v:
        inner = v.report
        reports = [LawReport(
            law_id=f"{sid}.construction",
            anchor=suite.anchor,
            mode=inner.mode,
            cases=inner.cases,
            outcome="fail",
            witness={"construction": inner.law_id, "witness": inner.witness},
            ms=inner.ms,
        )]
    except PreconditionError as p:
        reports = [LawReport(
            law_id=f"{sid}.construction",
            anchor=suite.anchor,
            mode="exhaustive",
            cases=0,
            outcome="fail",
            witness={"precondition": str(p)},
            ms=0.0,
        )]
    return _prefixed(sid, reports)


def run_selection(ids, cfg: Config) -> list[tuple[str, list[LawReport]]]:
    return [(sid, run_suite(sid, cfg)) for sid in ids]


def owning_suite(law_id: str, ids=None) -> str | None:
    """Longest registered suite id that prefixes a report id."""
    best = None
    for sid in (ids or SUITES):
        if law_id == sid or law_id.startswith(sid + "."):
            if best is None or len(sid) > len(best):
                best = sid
    return best
