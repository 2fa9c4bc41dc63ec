"""phi/psi conversions and the algebraic lifting chain."""

from dataclasses import replace

from lawcheck.kernel import BOOL, SumCarrier
from lawcheck.lifting import (
    alifting,
    check_algebraic_lifting,
    check_psi_phi_roundtrip,
)
from lawcheck.models import sigma_operation
from lawcheck.report import LawRun
from lawcheck.transformers import transformer


def test_psi_phi_recovers_algebraic_ops(qcfg):
    reports = check_psi_phi_roundtrip(qcfg, op_names=("get", "put", "fail"))
    ids = {r.law_id for r in reports}
    assert {"prop17.get", "prop17.put", "prop17.fail"} <= ids
    assert all(r.passed for r in reports)


def test_local_roundtrip_gap_is_recorded(qcfg):
    reports = check_psi_phi_roundtrip(qcfg)
    gap = next(r for r in reports if r.law_id == "prop17.local-distinct")
    # the check passes by EXHIBITING the inequality, so the witness stays
    assert gap.passed
    assert gap.witness is not None


def test_lifted_get_is_the_transformed_monads_get(qcfg):
    # lifting state's get along the exception transformer lands, pointwise,
    # on the get you would write for the transformed monad directly; that
    # direct get is the base component instantiated at the sum carrier
    get = sigma_operation("get", qcfg)
    lift = transformer("exceptT", qcfg).lift(get.monad)
    lifted = alifting(get, lift, qcfg)
    n = lift.dst

    run = LawRun("alget-direct", "plumbing")
    for a in qcfg.law_types(2):
        za = SumCarrier(BOOL, a, qcfg)  # the registry exceptT carries Bool errors
        direct = get.at(za)
        na = n.obj(a)
        ea = lifted.sig.obj(na)
        kf = na.key
        for t in ea.enum()[: qcfg.build_cases]:
            assert kf(lifted.at(a)(t)) == kf(direct(t))
            run.cases += 1
    assert run.cases > 0


def test_lifting_suite_single_cell(qcfg):
    reports = check_algebraic_lifting(qcfg, op_names=("put",),
                                      transformer_names=("envT",))
    assert all(r.passed for r in reports)
    kinds = {r.law_id.split(".")[-1] for r in reports}
    assert {"natural", "algebraic", "coherence", "explicit"} <= kinds


def test_deep_diagrams_add_transport_squares(qcfg):
    dcfg = replace(qcfg, deep_diagrams=True)
    reports = check_algebraic_lifting(dcfg, op_names=("ask",),
                                      transformer_names=("stateT",))
    deep = [r for r in reports if ".deep." in r.law_id]
    assert deep and all(r.passed for r in deep)
