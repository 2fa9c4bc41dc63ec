"""Interface hierarchy, the run_state equations, and backtracking."""

from dataclasses import replace

import pytest

from lawcheck.kernel import BOOL, LawViolation, TT, inl, inr
from lawcheck.hierarchy import (
    Equation,
    INTERFACES,
    InterfaceDef,
    _register,
    build_except_state_run_model,
    check_backtracking_semantics,
    check_hierarchy_inheritance,
    check_interface,
    check_run_equations,
    closure_operations,
    eval_state_t,
    except_model,
    interface_closure,
)


def test_closure_is_ancestors_first():
    names = [i.name for i in interface_closure("exceptStateRunMonad")]
    assert names[0] == "monad"
    assert names[-1] == "exceptStateRunMonad"
    assert names.index("stateMonad") < names.index("stateRunMonad")


def test_closure_collects_operations():
    ops = closure_operations("exceptStateRunMonad")
    assert ops == frozenset({
        "ret", "bind", "get", "put", "run_state", "fail", "catch",
    })


def test_register_rejects_equations_about_unknown_ops():
    bad = InterfaceDef(
        name="zapMonad",
        parents=("monad",),
        operations=(("zip", 0),),
        equations=(
            Equation("zip-zap", "plumbing", ("zap",), lambda model, run, cfg: None),
        ),
    )
    with pytest.raises(ValueError):
        _register(bad)
    assert "zapMonad" not in INTERFACES


def test_model_buildable_and_checked(qcfg):
    model = build_except_state_run_model(qcfg)  # check=True replays the equations
    assert model.provides("exceptStateRunMonad")
    assert model.provides("monad")


def test_run_equations_are_exhaustive(qcfg):
    reports = check_run_equations(qcfg)
    names = {r.law_id for r in reports}
    assert names == {
        "runstatet.run-ret", "runstatet.run-bind", "runstatet.run-get",
        "runstatet.run-put", "runstatet.run-fail", "runstatet.run-catch",
    }
    assert all(r.passed and r.mode == "exhaustive" for r in reports)


def test_eval_projects_the_result(qcfg):
    model = build_except_state_run_model(qcfg, check=False)
    m = model.monad
    prog = m.bind(model.op("put")("b1"), lambda _: model.op("get"))
    out = eval_state_t(model, prog, "b0")
    base = model.base
    ka = base.obj(BOOL).key
    assert ka(out) == ka(base.ret("b1"))


def test_catch_restores_pre_failure_state(qcfg):
    model = build_except_state_run_model(qcfg, check=False)
    report = check_backtracking_semantics(model, qcfg)
    assert report.passed


def test_no_backtrack_mutant_is_rejected(qcfg):
    mcfg = replace(qcfg, mutants=frozenset({"catch-no-backtrack"}))
    with pytest.raises(LawViolation) as err:
        build_except_state_run_model(mcfg)
    assert err.value.report.law_id.endswith(("run-fail", "run-catch"))
    assert err.value.report.witness is not None


def test_put_stateless_mutant_is_rejected(qcfg):
    mcfg = replace(qcfg, mutants=frozenset({"put-stateless"}))
    with pytest.raises(LawViolation) as err:
        build_except_state_run_model(mcfg)
    assert err.value.report.law_id.endswith("run-put")


def test_interface_equations_hold_on_inherited_models(qcfg):
    reports = check_hierarchy_inheritance(qcfg)
    assert all(r.passed for r in reports)
    prefixes = {r.law_id.split(".")[0] for r in reports}
    assert prefixes == {"hierarchy-inheritance"}


def test_exception_model_quantifies_denotable_programs(qcfg):
    model = except_model(qcfg)
    progs = model.programs(BOOL)
    keys = {model.key(BOOL)(p) for p in progs}
    # the designated failure and every pure return, nothing junk
    assert keys == {model.key(BOOL)(model.op("fail")(BOOL)),
                    model.key(BOOL)(model.monad.ret("b0")),
                    model.key(BOOL)(model.monad.ret("b1"))}
