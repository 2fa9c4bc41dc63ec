"""Base monads and the sigma-operation registry."""

from dataclasses import replace

import pytest

from lawcheck.kernel import BOOL, PreconditionError, TT, UNIT
from lawcheck.models import (
    ALGEBRAIC_OPS,
    BASE_MONADS,
    NON_ALGEBRAIC_OPS,
    algebraicity_check,
    base_monad,
    output_operation_swapped,
    sigma_operation,
)


def test_registry_builds_all_bases(qcfg):
    for name in BASE_MONADS:
        m = base_monad(name, qcfg)
        assert m.obj(BOOL).enum()
    with pytest.raises(KeyError):
        base_monad("probability", qcfg)


def test_base_monad_instances_are_shared(qcfg):
    assert base_monad("state", qcfg) is base_monad("state", qcfg)


def test_output_bind_appends_logs_in_order(qcfg):
    out = base_monad("output", qcfg)
    m = ("b0", ("w0",))
    k = lambda x: (TT, ("w1", "w1"))
    assert out.bind(m, k) == (TT, ("w0", "w1", "w1"))
    assert out.ret("b1") == ("b1", ())


def test_state_ret_threads_state(qcfg):
    stm = base_monad("state", qcfg)
    sa = stm.obj(BOOL)
    assert sa.key(stm.ret("b1")) == sa.key(lambda s: ("b1", s))


def test_operation_registry_constructs(qcfg):
    for name in ALGEBRAIC_OPS + NON_ALGEBRAIC_OPS:
        op = sigma_operation(name, qcfg)
        assert op.name == name
        assert op.at(BOOL) is not None


def test_callcc_is_gated(qcfg):
    with pytest.raises(PreconditionError):
        sigma_operation("callcc", qcfg)
    ccfg = replace(qcfg, enable_callcc=True)
    assert sigma_operation("callcc", ccfg).monad.name == "cont"


def test_get_classified_algebraic(qcfg):
    ev = algebraicity_check(sigma_operation("get", qcfg), qcfg)
    assert ev.verdict == "algebraic"
    assert ev.counterexample is None


def test_local_yields_counterexample(qcfg):
    ev = algebraicity_check(sigma_operation("local", qcfg), qcfg)
    assert ev.verdict == "counterexample"
    # the witness pins down a concrete bind the operation fails to commute with
    assert ev.counterexample is not None
    assert "lhs" in ev.counterexample and "rhs" in ev.counterexample


def test_output_swapped_argument_order_fails(qcfg):
    ev = algebraicity_check(output_operation_swapped(qcfg), qcfg)
    assert ev.verdict == "counterexample"


def test_output_order_mutant_flips_registry_op(qcfg):
    mcfg = replace(qcfg, mutants=frozenset({"output-order"}))
    ev = algebraicity_check(sigma_operation("output", mcfg), mcfg)
    assert ev.verdict == "counterexample"
