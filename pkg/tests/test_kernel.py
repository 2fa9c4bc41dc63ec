"""Carriers, function tables, and the generic law runners."""

from hypothesis import given, strategies as st

from lawcheck.kernel import (
    BOOL,
    FiniteType,
    Functor,
    ListCarrier,
    ProductCarrier,
    SumCarrier,
    TT,
    TableFun,
    UNIT,
    check_monad_laws,
    check_naturality,
    compose_functors,
    derive_seed,
    enumerate_functions,
    identity_functor,
    inl,
    inr,
    key_diff,
    obs_equal,
)
from lawcheck.models import base_monad
from lawcheck.report import canon, witness_bytes


def test_atomic_carriers():
    assert UNIT.enum() == [TT]
    assert BOOL.enum() == ["b0", "b1"]
    assert UNIT.exhaustive and not UNIT.open_domain


def test_product_and_sum_shapes(qcfg):
    p = ProductCarrier(BOOL, BOOL, qcfg)
    assert len(p.enum()) == 4
    s = SumCarrier(UNIT, BOOL, qcfg)
    assert len(s.enum()) == 3
    assert s.key(inl(TT)) == ("inl", "tt")
    assert s.key(inr("b1")) == ("inr", "b1")


def test_list_carrier_is_open(qcfg):
    l = ListCarrier(BOOL, qcfg)  # maxlen 3: 1 + 2 + 4 + 8 enumerated
    assert len(l.enum()) == 15
    assert l.open_domain
    # values longer than the enumeration bound still have keys
    assert l.key(("b0",) * 5) == ("b0",) * 5


def test_composed_functor_counts(cfg):
    # lists (maxlen 3) of exception values over Unit: 1 + 3 + 9 + 27
    lst = base_monad("list", cfg).functor
    exc = base_monad("except", cfg).functor
    both = compose_functors(lst, exc)
    assert len(both.obj(UNIT).enum()) == 40


def test_function_enumeration_modes(qcfg):
    fns, exhaustive = enumerate_functions(BOOL, BOOL, qcfg)
    assert exhaustive and len(fns) == 4
    tables = sorted(tuple(map(tuple, f.table())) for f in fns)
    assert len(set(tables)) == 4

    big = ProductCarrier(BOOL, ProductCarrier(BOOL, BOOL, qcfg), qcfg)
    sampled, exhaustive = enumerate_functions(big, big, qcfg, cap=16)
    assert not exhaustive
    again, _ = enumerate_functions(big, big, qcfg, cap=16)
    assert [f.table() for f in sampled] == [f.table() for f in again]


def test_table_fun_extension_is_pure(qcfg):
    dom = ListCarrier(BOOL, qcfg)
    outs = [("b0" if len(x) % 2 else "b1") for x in dom.enum()]
    f = TableFun(dom, BOOL, outs)
    g = TableFun(dom, BOOL, outs)
    long = ("b1",) * 7  # outside the enumerated table
    assert f(long) == f(long) == g(long)


@given(st.integers(min_value=0, max_value=2**63 - 1),
       st.lists(st.sampled_from(["a", "b", "law"]), max_size=3))
def test_derive_seed_stable(seed, labels):
    assert derive_seed(seed, *labels) == derive_seed(seed, *labels)


def test_derive_seed_separates_sites():
    assert derive_seed(0, "left") != derive_seed(0, "right")


keys = st.recursive(
    st.sampled_from(["a", "b", 0, 1, "tt"]),
    lambda c: st.tuples(c, c) | st.tuples(c, c, c),
    max_leaves=6,
)


@given(keys, keys)
def test_key_diff_agrees_with_equality(a, b):
    assert (key_diff(a, b) is None) == (a == b)
    if a != b:
        d = key_diff(a, b)
        assert "path" in d and "lhs" in d and "rhs" in d


@given(keys)
def test_witness_serialization_roundtrips(x):
    assert witness_bytes(canon(x)) == witness_bytes(x)


def test_naturality_rejects_broken_family(qcfg):
    # swaps booleans at Bool, identity elsewhere: not a natural family
    def component(a):
        if a is BOOL:
            return lambda x: "b1" if x == "b0" else "b0"
        return lambda x: x

    r = check_naturality(identity_functor(), identity_functor(), component,
                         qcfg, law_id="broken", anchor="plumbing")
    assert not r.passed
    assert r.witness is not None and "h" in r.witness


def test_obs_equal_distinguishes_state_values(qcfg):
    stm = base_monad("state", qcfg)
    m1 = stm.ret(TT)
    m2 = lambda s: (TT, "b0")  # drops the incoming state at one point
    same, _ = obs_equal(stm, UNIT, m1, stm.ret(TT))
    assert same
    differ, diff = obs_equal(stm, UNIT, m1, m2)
    assert not differ and diff["path"] != []


def test_monad_law_reports_for_identity(qcfg):
    reports = check_monad_laws(base_monad("identity", qcfg), qcfg)
    assert len(reports) == 6
    assert all(r.passed for r in reports)
    # unit laws fit under the enumeration cap; assoc's value x fn x fn
    # space is allowed to fall back to sampling
    by_tail = {r.law_id.split(".")[-1]: r for r in reports}
    assert by_tail["left-unit"].mode == "exhaustive"
    assert by_tail["right-unit"].mode == "exhaustive"
    assert {"left-unit", "right-unit", "assoc"} <= set(by_tail)


def test_functor_map_respects_composition_spot(qcfg):
    lst = base_monad("list", qcfg).functor
    f = lambda b: "b1"
    g = lambda b: TT
    xs = ("b0", "b1", "b0")
    lhs = lst.map(lambda x: g(f(x)))(xs)
    rhs = lst.map(g)(lst.map(f)(xs))
    assert lst.obj(UNIT).key(lhs) == lst.obj(UNIT).key(rhs)
