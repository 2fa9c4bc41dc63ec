"""Continuation-probed monads and lifting through them."""

from dataclasses import replace

import pytest

from lawcheck.kernel import (
    BOOL,
    PreconditionError,
    LawViolation,
    TT,
    UNIT,
    check_monad_laws,
)
from lawcheck.codensity import (
    KComp,
    check_codensity_lifting,
    codensity,
    from_morphism,
    from_value,
    lift_k,
    lift_value,
    mk_naturality_holds,
    psik,
)
from lawcheck.models import algebraicity_check, base_monad, sigma_operation


def test_codensity_identity_monad_laws(qcfg):
    km = codensity(base_monad("identity", qcfg), qcfg)
    assert all(r.passed for r in check_monad_laws(km, qcfg))


def test_lift_then_from_is_identity(qcfg):
    stm = base_monad("state", qcfg)
    sa = stm.obj(BOOL)
    for m in sa.enum()[:8]:
        back = from_value(lift_value(stm, m), BOOL, stm, qcfg)
        assert sa.key(back) == sa.key(m)


def test_lift_k_is_a_monad_morphism(qcfg):
    e = lift_k(base_monad("except", qcfg), qcfg)
    assert e.provenance and all(r.passed for r in e.provenance)


def test_library_values_satisfy_continuation_naturality(qcfg):
    stm = base_monad("state", qcfg)
    km = codensity(stm, qcfg)
    c = km.bind(km.ret("b0"), lambda x: km.ret(x))
    ok, witness = mk_naturality_holds(c, BOOL, stm, qcfg)
    assert ok and witness is None


def test_carrier_inspecting_value_is_rejected(qcfg):
    # a foreign computation that answers by carrier size instead of by
    # calling its continuation is not natural in the answer type
    stm = base_monad("state", qcfg)
    rogue = KComp(lambda b, k: stm.ret(b.enum()[0]), trusted=False)
    ok, witness = mk_naturality_holds(rogue, BOOL, stm, qcfg)
    assert not ok and witness is not None
    with pytest.raises(PreconditionError):
        from_value(rogue, BOOL, stm, qcfg)


def test_generic_effects_become_algebraic(qcfg):
    # handle is not algebraic over except, but its image over the
    # continuation-probed monad always is
    op = psik(sigma_operation("handle", qcfg), qcfg)
    ev = algebraicity_check(op, qcfg)
    assert ev.verdict == "algebraic"


def test_from_rot_mutant_detected_at_construction(qcfg):
    mcfg = replace(qcfg, mutants=frozenset({"from-rot"}))
    with pytest.raises(LawViolation):
        from_morphism(base_monad("state", mcfg), mcfg)


def test_local_lifts_along_exceptt(qcfg):
    reports = check_codensity_lifting(qcfg, op_names=("local",),
                                      fmt_names=("exceptT",))
    assert reports and all(r.passed for r in reports)
    assert any(r.law_id.endswith(".coherence") for r in reports)
