"""The stateful product program and its sweep."""

from dataclasses import replace

import pytest

from lawcheck.kernel import PreconditionError, inl, inr
from lawcheck.fastproduct import (
    PROGRAM_MAX_ELEM,
    PROGRAM_MAX_LEN,
    check_fast_product_correct,
    check_rec_behavior,
    fast_product,
    fast_product_rec,
    product_model,
)
from lawcheck.hierarchy import eval_state_t


def _run(model, prog, s):
    return model.op("run_state")(prog, s)


def test_product_and_final_state(qcfg):
    model = product_model(qcfg)
    kf = model.run_carrier(model.s_type).key
    got = _run(model, fast_product(model, [2, 3]), 5)
    # the accumulator is seeded with 1, so the final state is the product
    assert kf(got) == kf(model.base.ret((6, 6)))


def test_zero_aborts_and_restores_initial_state(qcfg):
    model = product_model(qcfg)
    kf = model.run_carrier(model.s_type).key
    for s0 in (0, 3, 7):
        got = _run(model, fast_product(model, [2, 0, 3]), s0)
        assert kf(got) == kf(model.base.ret((0, s0)))


def test_empty_product_is_one(qcfg):
    model = product_model(qcfg)
    ks = model.base.obj(model.s_type).key
    assert ks(eval_state_t(model, fast_product(model, []), 4)) == \
        ks(model.base.ret(1))


def test_rec_surfaces_failure_without_handler(qcfg):
    model = product_model(qcfg)
    out = _run(model, fast_product_rec(model, [0]), 2)
    assert model.run_carrier(model.s_type).key(out)[0] == "inl"


def test_program_bounds_are_enforced(qcfg):
    model = product_model(qcfg)
    with pytest.raises(PreconditionError):
        fast_product(model, [1] * (PROGRAM_MAX_LEN + 1))
    with pytest.raises(PreconditionError):
        fast_product(model, [PROGRAM_MAX_ELEM + 1])
    with pytest.raises(PreconditionError):
        fast_product(model, [-1])


def test_sweep_flags_shrink_the_run(qcfg):
    scfg = replace(qcfg, fp_max_len=2, fp_max_elem=1)
    report = check_fast_product_correct(scfg)
    # 7 lists of length <= 2 over {0,1}, two reachable states
    assert report.passed and report.mode == "exhaustive"
    assert report.cases == 7 * 2


def test_rec_clauses(qcfg):
    report = check_rec_behavior(qcfg)
    assert report.passed
