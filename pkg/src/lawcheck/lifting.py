"""Lifting algebraic operations through monad transformers.

An operation family  op : E(M A) -> M A  has a generic-effect form

    phi(op) = op . (E # ret) : E => M

and a generic effect  n : E => M  induces an operation family

    psi(n) = join . n_{M A} : E(M A) -> M A.

On algebraic operations phi and psi are mutually inverse; on a
non-algebraic one the round trip lands somewhere else (``local`` is the
stock witness).  Given a transformer lift  e : M => t(M), an algebraic
operation transports along its generic effect:

    alifting(op, e) = psi(e . phi(op))

which unfolds pointwise to  join . e . op . (E # ret)  on E(tM X).
The lifted family is natural and algebraic again, and e becomes a
morphism of operations:

    e . op = alifting(op, e) . (E # e).
"""

from __future__ import annotations

from dataclasses import replace

from .kernel import (
    Config,
    Monad,
    NatTrans,
    ShapeError,
    bounded_pool,
    check_naturality,
    compose_functors,
    vcomp,
)
from .models import (
    ALGEBRAIC_OPS,
    SigmaOperation,
    algebraicity_check,
    as_algebraic,
    sigma_operation,
)
from .report import LawReport, LawRun
from .transformers import TRANSFORMERS, MonadMorphism, transformer


def phi(op: SigmaOperation) -> NatTrans:
    """Generic-effect form of an operation:  op_A . (E # ret)."""
    monad, sig = op.monad, op.sig
    return NatTrans(
        f"phi[{op.name}]",
        sig,
        monad.functor,
        lambda a: (
            lambda opa, emb: lambda t: opa(emb(t))
        )(op.at(a), sig.map(monad.ret)),
    )


def psi(n: NatTrans, monad: Monad, cfg: Config, *, name=None,
        anchor="lifting algebraic ops", check=True) -> SigmaOperation:
    """Operation form of a generic effect:  join . n at M A."""
    if n.dst.name != monad.functor.name:
        raise ShapeError(
            f"psi target mismatch: {n.dst.name} vs {monad.functor.name}"
        )
    component = lambda a: (
        lambda comp: lambda t: monad.join(comp(t))
    )(n.at(monad.obj(a)))
    return SigmaOperation(
        name or f"psi[{n.name}]", n.src, monad, component, cfg,
        anchor=anchor, check=check,
    )


def alifting(op: SigmaOperation, lift: MonadMorphism, cfg: Config, *,
             check=True) -> SigmaOperation:
    """Transport an algebraic operation along a transformer lift."""
    op = as_algebraic(op, cfg)
    if lift.src.name != op.monad.name:
        raise ShapeError(
            f"lift source mismatch: {lift.src.name} vs {op.monad.name}"
        )
    generic = vcomp(lift.as_nat_trans(), phi(op))
    return psi(
        generic, lift.dst, cfg,
        name=f"alifting[{op.name}]({lift.dst.name})", check=check,
    )


def alifting_explicit(op: SigmaOperation, lift: MonadMorphism,
                      cfg: Config) -> SigmaOperation:
    """The lifted operation written out:  join . e . op . (E # ret).

    Definitionally the same arrow as ``alifting``; building it without
    the combinator stack gives the agreement check something independent
    to compare against.
    """
    monad, sig = op.monad, op.sig
    tm = lift.dst

    def component(a):
        tma = tm.obj(a)
        op_t = op.at(tma)
        e_t = lift.at(tma)
        emb = sig.map(monad.ret)
        return lambda t: tm.bind(e_t(op_t(emb(t))), lambda m: m)

    return SigmaOperation(
        f"aliftingE[{op.name}]({tm.name})", sig, tm, component, cfg,
        anchor="lifting algebraic ops", check=False,
    )


def pointwise_equal_ops(run: LawRun, left: SigmaOperation, right: SigmaOperation,
                     cfg: Config, types) -> None:
    """Compare two operation families on the same signature and monad."""
    monad, sig = left.monad, left.sig
    for a in types:
        ma = monad.obj(a)
        ea = sig.obj(ma)
        kf = ma.key
        la, ra = left.at(a), right.at(a)
        for t in bounded_pool(run, cfg, ea):
            if not run.check(
                kf(la(t)) == kf(ra(t)),
                lambda a=a, t=t, ea=ea, la=la, ra=ra, kf=kf: {
                    "A": a.name, "t": ea.key(t),
                    "lhs": kf(la(t)), "rhs": kf(ra(t)),
                },
            ):
                return


def check_psi_phi_roundtrip(cfg: Config, *, op_names=None) -> list[LawReport]:
    """psi . phi restores every algebraic operation; ``local`` must move.

    The final report passes when the non-algebraic round trip produces a
    genuine counterexample, which is recorded as its witness.
    """
    reports = []
    types = cfg.law_types(2)
    for name in (op_names or ALGEBRAIC_OPS):
        op = sigma_operation(name, cfg)
        back = psi(
            phi(op), op.monad, cfg,
            name=f"psiphi[{name}]", anchor="Prop 17", check=False,
        )
        run = LawRun(f"prop17.{name}", "Prop 17")
        pointwise_equal_ops(run, op, back, cfg, types)
        reports.append(run.report())

    op = sigma_operation("local", cfg)
    back = psi(
        phi(op), op.monad, cfg,
        name="psiphi[local]", anchor="Prop 17", check=False,
    )
    run = LawRun("prop17.local-distinct", "Prop 17")
    pointwise_equal_ops(run, op, back, cfg, types)
    inner = run.report()
    reports.append(
        LawReport(
            law_id="prop17.local-distinct",
            anchor="Prop 17",
            mode=inner.mode,
            cases=inner.cases,
            outcome="pass" if not inner.passed else "fail",
            witness=inner.witness,
            ms=inner.ms,
        )
    )
    return reports


def operation_coherence_square(label: str, op: SigmaOperation, lift: MonadMorphism,
                               lifted: SigmaOperation, cfg: Config, types, *,
                               anchor="Thm 19") -> LawReport:
    """e . op = lifted . (E # e)  on E(M A)."""
    monad, sig, tm = op.monad, op.sig, lift.dst
    run = LawRun(f"{label}.coherence", anchor)
    for a in types:
        ma, tma = monad.obj(a), tm.obj(a)
        ea = sig.obj(ma)
        kf = tma.key
        op_a, lifted_a, e_a = op.at(a), lifted.at(a), lift.at(a)
        emb = sig.map(e_a)
        for t in bounded_pool(run, cfg, ea):
            lhs = e_a(op_a(t))
            rhs = lifted_a(emb(t))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, t=t, ea=ea, lhs=lhs, rhs=rhs, kf=kf: {
                    "A": a.name, "t": ea.key(t),
                    "lhs": kf(lhs), "rhs": kf(rhs),
                },
            ):
                break
        if run.failed:
            break
    return run.report()


def check_algebraic_lifting(cfg: Config, *, op_names=None,
                            transformer_names=None) -> list[LawReport]:
    """Every algebraic operation lifts through every transformer.

    Per (transformer, operation) cell: the lifted family is natural and
    algebraic, the lift morphism commutes with the operation, and the
    combinator composition agrees with the written-out form.  With
    ``deep_diagrams`` the generic-effect transport squares are added.
    """
    reports = []
    types = cfg.law_types(2)
    for t_name in (transformer_names or TRANSFORMERS):
        t = transformer(t_name, cfg)
        for op_name in (op_names or ALGEBRAIC_OPS):
            op = sigma_operation(op_name, cfg)
            lift = t.lift(op.monad)
            tm = lift.dst
            label = f"thm19.{t_name}.{op_name}"
            lifted = alifting(op, lift, cfg)

            reports.append(
                check_naturality(
                    compose_functors(lifted.sig, tm.functor), tm.functor,
                    lifted.at, cfg,
                    law_id=f"{label}.natural", anchor="Thm 19", types=types,
                )
            )

            ev = algebraicity_check(lifted, cfg, types=types)
            reports.append(
                replace(ev.report, law_id=f"{label}.algebraic", anchor="Thm 19")
            )

            reports.append(operation_coherence_square(label, op, lift, lifted, cfg, types))

            explicit = alifting_explicit(op, lift, cfg)
            run = LawRun(f"{label}.explicit", "Thm 19")
            pointwise_equal_ops(run, lifted, explicit, cfg, types)
            reports.append(run.report())

            if cfg.deep_diagrams:
                reports.extend(
                    _deep_squares(label, op, lift, lifted, cfg, types)
                )
    return reports


def _deep_squares(label: str, op: SigmaOperation, lift: MonadMorphism,
                  lifted: SigmaOperation, cfg: Config, types) -> list[LawReport]:
    """Generic-effect squares: phi is natural, and transport commutes.

    phi(lifted) = e . phi(op)  componentwise on E A, plus naturality of
    phi(op) itself as a transformation E => M.
    """
    monad, sig = op.monad, op.sig
    reports = []

    reports.append(
        check_naturality(
            sig, monad.functor, phi(op).at, cfg,
            law_id=f"{label}.deep.phi-natural", anchor="Thm 19",
            types=types,
        )
    )

    run = LawRun(f"{label}.deep.generic-transport", "Thm 19")
    gen_lift = phi(lifted)
    gen_base = phi(op)
    for a in types:
        ea = sig.obj(a)
        tma = lift.dst.obj(a)
        kf = tma.key
        lift_a = lift.at(a)
        ga, gb = gen_lift.at(a), gen_base.at(a)
        for t in bounded_pool(run, cfg, ea):
            lhs = ga(t)
            rhs = lift_a(gb(t))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, t=t, ea=ea, lhs=lhs, rhs=rhs, kf=kf: {
                    "A": a.name, "t": ea.key(t),
                    "lhs": kf(lhs), "rhs": kf(rhs),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())
    return reports
