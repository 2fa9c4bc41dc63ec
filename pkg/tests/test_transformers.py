"""Transformers, lift morphisms, and the stateT-over-identity coincidence."""

from dataclasses import replace

import pytest

from lawcheck.kernel import BOOL, LawViolation, UNIT
from lawcheck.models import base_monad
from lawcheck.transformers import (
    MonadMorphism,
    TRANSFORMERS,
    check_fmt_laws,
    check_monad_morphism,
    coincidence_state_t_identity,
    composable_pool_pairs,
    except_t,
    morphism_pool,
    transformer,
)


def test_registry_builds_every_transformer(qcfg):
    for name in TRANSFORMERS:
        t = transformer(name, qcfg)
        n = t.apply(base_monad("identity", qcfg))
        assert n.obj(BOOL).enum()
        assert t is transformer(name, qcfg)


def test_lift_carries_its_own_evidence(qcfg):
    lift = transformer("stateT", qcfg).lift(base_monad("except", qcfg))
    assert lift.provenance and all(r.passed for r in lift.provenance)


def test_lift_laws_over_state_base(qcfg):
    lift = transformer("exceptT", qcfg).lift(base_monad("state", qcfg))
    reports = check_monad_morphism(lift, qcfg)
    assert [r.law_id.split(".")[-1] for r in reports] == [
        "morphism-ret", "morphism-bind", "morphism-natural",
    ]
    assert all(r.passed for r in reports)


def test_exceptt_bind_swap_fails_to_build(qcfg):
    mcfg = replace(qcfg, mutants=frozenset({"exceptt-bind-swap"}))
    with pytest.raises(LawViolation) as err:
        except_t(BOOL, mcfg).apply(base_monad("identity", mcfg))
    assert err.value.report.witness is not None


def test_fmt_laws_for_statet(qcfg):
    reports = check_fmt_laws(transformer("stateT", qcfg), qcfg)
    assert all(r.passed for r in reports)
    assert any(r.law_id.endswith("hmap-id") for r in reports)
    assert any(r.law_id.endswith("lift-natural") for r in reports)


def test_morphism_pool_names_are_unique(qcfg):
    names = [e.name for e in morphism_pool(qcfg)]
    assert len(names) == len(set(names))


def test_pool_compositions_are_morphisms(qcfg):
    pairs = composable_pool_pairs(qcfg)
    assert pairs
    first, second = pairs[0]
    # a composite of lawful morphisms must survive the construction check
    composed = MonadMorphism(
        f"{second.name}.{first.name}", first.src, second.dst,
        lambda a: (lambda f1, s1: lambda m: s1(f1(m)))(first.at(a), second.at(a)),
        qcfg,
    )
    assert composed.src is first.src and composed.dst is second.dst


def test_statet_identity_matches_direct_state(qcfg):
    reports = coincidence_state_t_identity(qcfg)
    assert {r.law_id for r in reports} == {
        "statet-identity.ret", "statet-identity.bind",
        "statet-identity.get", "statet-identity.put",
    }
    assert all(r.passed for r in reports)
