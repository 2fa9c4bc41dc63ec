"""Monad transformers and functorial monad transformers (FMTs).

A ``Transformer`` sends every registered base monad M to a monad t(M)
together with a lift morphism  M ~> t(M).  An ``FMT`` additionally maps
transformations between base monads to transformations between the
transformed monads (``hmap``) subject to three law groups:

  1. hmap sends monad morphisms to monad morphisms;
  2. hmap preserves identities and vertical composition;
  3. lift is natural in the base monad:
         hmap(n) . lift_M  =  lift_N . n.

The state, exception, environment and output transformers are functorial.
The continuation transformer is not: given only M ~> N there is no
general map from (X -> M R) -> M R to (X -> N R) -> N R, so ``cont_t``
registers as a plain Transformer and the FMT suites quantify over the
other four.
"""

from __future__ import annotations

import itertools
from dataclasses import replace

from .kernel import (
    BOOL,
    TT,
    UNIT,
    Carrier,
    Config,
    FunCarrier,
    Functor,
    LawViolation,
    Monad,
    NatTrans,
    ProductCarrier,
    SumCarrier,
    bounded_pool,
    cases,
    check_naturality,
    describe_fun,
    fn_pool,
    identity_nt,
    inl,
    inr,
    monad_from_ret_bind,
    pool,
    vcomp,
)
from .models import base_monad, log_carrier, sigma_operation
from .report import LawReport, LawRun

TRANSFORMERS = ("stateT", "exceptT", "envT", "outputT", "contT")
FMTS = ("stateT", "exceptT", "envT", "outputT")


class MonadMorphism:
    """Component family M A -> N A preserving ret and bind."""

    def __init__(self, name: str, src: Monad, dst: Monad, component,
                 cfg: Config, *, anchor="Sect 3.3", check=True):
        self.name = name
        self.src = src
        self.dst = dst
        self.anchor = anchor
        self._component = component
        self.provenance = ()
        if check:
            bcfg = replace(cfg, probe_budget=max(20_000, cfg.probe_budget // 4))
            reports = check_monad_morphism(
                self, bcfg, types=cfg.law_types(2), cap=cfg.build_cases
            )
            for r in reports:
                if not r.passed:
                    raise LawViolation(r)
            self.provenance = tuple(reports)

    def at(self, a: Carrier):
        return self._component(a)

    def as_nat_trans(self) -> NatTrans:
        return NatTrans(self.name, self.src.functor, self.dst.functor, self._component)

    def __repr__(self):
        return f"<MonadMorphism {self.name}: {self.src.name} -> {self.dst.name}>"


def check_monad_morphism(e: MonadMorphism, cfg: Config, *, types=None, cap=None,
                         label=None) -> list[LawReport]:
    """Ret and bind preservation, plus the naturality square they imply."""
    label = label or e.name
    types = types if types is not None else cfg.law_types(3)
    src, dst = e.src, e.dst
    reports = []

    run = LawRun(f"{label}.morphism-ret", e.anchor)
    for a in types:
        na = dst.obj(a)
        kf = na.key
        comp = e.at(a)
        for x in a.enum():
            if not run.check(
                kf(comp(src.ret(x))) == kf(dst.ret(x)),
                lambda a=a, x=x: {"A": a.name, "a": a.key(x)},
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun(f"{label}.morphism-bind", e.anchor)
    for a, b in itertools.product(types, repeat=2):
        ma, mb, nb = src.obj(a), src.obj(b), dst.obj(b)
        kf = nb.key
        comp_a, comp_b = e.at(a), e.at(b)
        fs = fn_pool(run, cfg, a, mb, label="f")
        for m, f in cases(run, cfg, pool(run, ma), fs, cap=cap,
                          obs=(nb,), spread=len(types) ** 2):
            lhs = comp_b(src.bind(m, f))
            rhs = dst.bind(comp_a(m), lambda x: comp_b(f(x)))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, b=b, m=m, f=f, ma=ma, mb=mb, lhs=lhs, rhs=rhs: {
                    "A": a.name, "B": b.name, "m": ma.key(m),
                    "f": describe_fun(f, a, mb), "lhs": kf(lhs), "rhs": kf(rhs),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    reports.append(
        check_naturality(
            src.functor, dst.functor, e._component, cfg,
            law_id=f"{label}.morphism-natural", anchor=e.anchor, types=types, cap=cap,
        )
    )
    return reports


class Transformer:
    """Base-monad-indexed family of monads with a lift morphism."""

    def __init__(self, name: str, cfg: Config, build, build_lift):
        self.name = name
        self.cfg = cfg
        self._build = build
        self._build_lift = build_lift
        self._monads: dict[str, Monad] = {}
        self._lifts: dict[str, MonadMorphism] = {}

    def apply(self, base: Monad) -> Monad:
        m = self._monads.get(base.name)
        if m is None:
            m = self._monads[base.name] = self._build(base)
        return m

    def lift(self, base: Monad) -> MonadMorphism:
        e = self._lifts.get(base.name)
        if e is None:
            transformed = self.apply(base)
            e = self._lifts[base.name] = MonadMorphism(
                f"lift[{self.name}]({base.name})", base, transformed,
                self._build_lift(base), self.cfg, anchor="Sect 3.3",
            )
        return e

    def __repr__(self):
        return f"<Transformer {self.name}>"


class FMT(Transformer):
    """Functorial transformer: also acts on transformations between bases."""

    def __init__(self, name, cfg, build, build_lift, build_hmap):
        super().__init__(name, cfg, build, build_lift)
        self._build_hmap = build_hmap

    def hmap(self, src: Monad, dst: Monad, n) -> NatTrans:
        """Image of n : src ~> dst under the transformer; n needs only ``at``."""
        tsrc, tdst = self.apply(src), self.apply(dst)
        return NatTrans(
            f"hmap[{self.name}]({getattr(n, 'name', 'n')})",
            tsrc.functor,
            tdst.functor,
            self._build_hmap(src, dst, n),
        )


_transformers: dict = {}


def transformer(name: str, cfg: Config) -> Transformer:
    t = _transformers.get((name, cfg))
    if t is None:
        t = _transformers[(name, cfg)] = _build_transformer(name, cfg)
    return t


def state_t(s_type, cfg: Config) -> FMT:
    def build(base: Monad) -> Monad:
        name = f"stateT[{s_type.name}]({base.name})"
        functor = Functor(
            name,
            lambda a: FunCarrier(s_type, base.obj(ProductCarrier(a, s_type, cfg)), cfg),
            lambda f: lambda m: lambda s: base.map(lambda p: (f(p[0]), p[1]))(m(s)),
        )
        ret = lambda x: lambda s: base.ret((x, s))
        bind = lambda m, f: lambda s: base.bind(m(s), lambda p: f(p[0])(p[1]))
        return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="state transformer")

    def build_lift(base: Monad):
        return lambda a: lambda m: lambda s: base.bind(m, lambda x: base.ret((x, s)))

    def build_hmap(src: Monad, dst: Monad, n):
        return lambda a: (
            lambda comp: lambda m: lambda s: comp(m(s))
        )(n.at(ProductCarrier(a, s_type, cfg)))

    return FMT(f"stateT[{s_type.name}]", cfg, build, build_lift, build_hmap)


def except_t(z_type, cfg: Config) -> FMT:
    swap = cfg.has_mutant("exceptt-bind-swap")

    def build(base: Monad) -> Monad:
        name = f"exceptT[{z_type.name}]({base.name})"
        functor = Functor(
            name,
            lambda a: base.obj(SumCarrier(z_type, a, cfg)),
            lambda f: base.map(lambda c: c if c[0] == "inl" else inr(f(c[1]))),
        )
        ret = lambda x: base.ret(inr(x))
        if swap:
            # mutant: the match arms' injections are swapped, so the
            # continuation is never consulted
            step = lambda f: lambda c: base.ret(inr(c[1]) if c[0] == "inl" else inl(c[1]))
        else:
            step = lambda f: lambda c: base.ret(c) if c[0] == "inl" else f(c[1])
        bind = lambda m, f: base.bind(m, step(f))
        return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="exception transformer")

    def build_lift(base: Monad):
        return lambda a: lambda m: base.bind(m, lambda x: base.ret(inr(x)))

    def build_hmap(src: Monad, dst: Monad, n):
        return lambda a: n.at(SumCarrier(z_type, a, cfg))

    return FMT(f"exceptT[{z_type.name}]", cfg, build, build_lift, build_hmap)


def env_t(e_type, cfg: Config) -> FMT:
    def build(base: Monad) -> Monad:
        name = f"envT[{e_type.name}]({base.name})"
        functor = Functor(
            name,
            lambda a: FunCarrier(e_type, base.obj(a), cfg),
            lambda f: lambda m: lambda e: base.map(f)(m(e)),
        )
        ret = lambda x: lambda e: base.ret(x)
        bind = lambda m, f: lambda e: base.bind(m(e), lambda x: f(x)(e))
        return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="environment transformer")

    def build_lift(base: Monad):
        return lambda a: lambda m: lambda e: m

    def build_hmap(src: Monad, dst: Monad, n):
        return lambda a: (lambda comp: lambda m: lambda e: comp(m(e)))(n.at(a))

    return FMT(f"envT[{e_type.name}]", cfg, build, build_lift, build_hmap)


def output_t(cfg: Config) -> FMT:
    # shorter log window than the base output monad: the transformed
    # carrier sits inside function-space towers, and two letters at
    # length two already distinguish append orders
    logs = log_carrier(cfg, maxlen=min(2, cfg.list_maxlen))

    def build(base: Monad) -> Monad:
        name = f"outputT({base.name})"
        functor = Functor(
            name,
            lambda a: base.obj(ProductCarrier(a, logs, cfg)),
            lambda f: base.map(lambda p: (f(p[0]), p[1])),
        )
        ret = lambda x: base.ret((x, ()))
        bind = lambda m, f: base.bind(
            m, lambda p: base.map(lambda q: (q[0], p[1] + q[1]))(f(p[0]))
        )
        return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="output transformer")

    def build_lift(base: Monad):
        return lambda a: lambda m: base.bind(m, lambda x: base.ret((x, ())))

    def build_hmap(src: Monad, dst: Monad, n):
        return lambda a: n.at(ProductCarrier(a, logs, cfg))

    return FMT("outputT", cfg, build, build_lift, build_hmap)


def cont_t(r_type, cfg: Config) -> Transformer:
    def build(base: Monad) -> Monad:
        name = f"contT[{r_type.name}]({base.name})"
        mr = base.obj(r_type)
        functor = Functor(
            name,
            lambda a: FunCarrier(FunCarrier(a, mr, cfg), mr, cfg),
            lambda f: lambda m: lambda k: m(lambda a: k(f(a))),
        )
        ret = lambda x: lambda k: k(x)
        bind = lambda m, f: lambda k: m(lambda a: f(a)(k))
        return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="continuation transformer")

    def build_lift(base: Monad):
        return lambda a: lambda m: lambda k: base.bind(m, k)

    return Transformer(f"contT[{r_type.name}]", cfg, build, build_lift)


def identity_fmt(cfg: Config) -> FMT:
    """Degenerate transformer: t(M) = M, lift = id, hmap = id."""
    return FMT(
        "idT", cfg,
        lambda base: base,
        lambda base: lambda a: lambda m: m,
        lambda src, dst, n: lambda a: n.at(a),
    )


def _build_transformer(name: str, cfg: Config) -> Transformer:
    if name == "stateT":
        return state_t(BOOL, cfg)
    if name == "exceptT":
        return except_t(BOOL, cfg)
    if name == "envT":
        return env_t(BOOL, cfg)
    if name == "outputT":
        return output_t(cfg)
    if name == "contT":
        return cont_t(BOOL, cfg)
    raise KeyError(f"unknown transformer: {name}")


# ---------------------------------------------------------------------------
# transformation pool for the FMT laws

_pool_cache: dict = {}


def morphism_pool(cfg: Config) -> list[MonadMorphism]:
    """Small pool of lawful base-monad morphisms quantified over by the FMT suite."""
    entries = _pool_cache.get(cfg)
    if entries is not None:
        return entries
    identity = base_monad("identity", cfg)
    state = base_monad("state", cfg)
    exc = base_monad("except", cfg)
    lst = base_monad("list", cfg)
    env = base_monad("env", cfg)
    entries = [
        MonadMorphism(
            "id(state)", state, state, lambda a: lambda m: m, cfg
        ),
        MonadMorphism(
            "ret(identity->except)", identity, exc, lambda a: exc.ret, cfg
        ),
        MonadMorphism(
            "ret(identity->env)", identity, env, lambda a: env.ret, cfg
        ),
        MonadMorphism(
            "except->list", exc, lst,
            lambda a: lambda c: () if c[0] == "inl" else (c[1],), cfg,
        ),
        MonadMorphism(
            "env->state", env, state, lambda a: lambda m: lambda s: (m(s), s), cfg
        ),
    ]
    _pool_cache[cfg] = entries
    return entries


def composable_pool_pairs(cfg: Config):
    """(first, second) pairs from the pool with matching boundaries."""
    by_src = {}
    for e in morphism_pool(cfg):
        by_src.setdefault(e.src.name, []).append(e)
    pairs = []
    for first in morphism_pool(cfg):
        for second in by_src.get(first.dst.name, []):
            pairs.append((first, second))
    return pairs


# ---------------------------------------------------------------------------
# law suites


def check_fmt_laws(t: FMT, cfg: Config, *, types=None, cap=None) -> list[LawReport]:
    """The three FMT law groups over the morphism pool."""
    types = types if types is not None else cfg.law_types(2)
    reports = []

    # group 1: hmap of a monad morphism is a monad morphism
    for e in morphism_pool(cfg):
        tsrc, tdst = t.apply(e.src), t.apply(e.dst)
        image = MonadMorphism(
            f"hmap[{t.name}]({e.name})", tsrc, tdst,
            t.hmap(e.src, e.dst, e).at, cfg, check=False,
        )
        for r in check_monad_morphism(
            image, cfg, types=types, cap=cap, label=f"{t.name}.hmap({e.name})"
        ):
            reports.append(r)

    # group 2: hmap preserves identity and vertical composition
    run = LawRun(f"{t.name}.hmap-id", "Sect 3.4")
    state = base_monad("state", cfg)
    tstate = t.apply(state)
    mapped = t.hmap(state, state, identity_nt(state.functor))
    for a in types:
        ta = tstate.obj(a)
        kf = ta.key
        comp = mapped.at(a)
        for m in bounded_pool(run, cfg, ta):
            if not run.check(
                kf(comp(m)) == kf(m), lambda a=a, m=m, ta=ta: {"A": a.name, "m": ta.key(m)}
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun(f"{t.name}.hmap-comp", "Sect 3.4")
    for first, second in composable_pool_pairs(cfg):
        composed = vcomp(second.as_nat_trans(), first.as_nat_trans())
        lhs_nt = t.hmap(first.src, second.dst, composed)
        rhs_first = t.hmap(first.src, first.dst, first)
        rhs_second = t.hmap(second.src, second.dst, second)
        tsrc = t.apply(first.src)
        tdst = t.apply(second.dst)
        for a in types:
            ta, tb = tsrc.obj(a), tdst.obj(a)
            kf = tb.key
            for m in bounded_pool(run, cfg, ta):
                lhs = lhs_nt.at(a)(m)
                rhs = rhs_second.at(a)(rhs_first.at(a)(m))
                if not run.check(
                    kf(lhs) == kf(rhs),
                    lambda a=a, m=m, ta=ta, first=first, second=second: {
                        "A": a.name, "m": ta.key(m),
                        "first": first.name, "second": second.name,
                    },
                ):
                    break
            if run.failed:
                break
        if run.failed:
            break
    reports.append(run.report())

    # group 3: lift is natural in the base monad
    run = LawRun(f"{t.name}.lift-natural", "Sect 3.4")
    for e in morphism_pool(cfg):
        lift_src = t.lift(e.src)
        lift_dst = t.lift(e.dst)
        mapped = t.hmap(e.src, e.dst, e)
        tdst = t.apply(e.dst)
        for a in types:
            ma = e.src.obj(a)
            ta = tdst.obj(a)
            kf = ta.key
            for m in bounded_pool(run, cfg, ma):
                lhs = mapped.at(a)(lift_src.at(a)(m))
                rhs = lift_dst.at(a)(e.at(a)(m))
                if not run.check(
                    kf(lhs) == kf(rhs),
                    lambda a=a, m=m, ma=ma, e=e: {
                        "A": a.name, "n": e.name, "m": ma.key(m),
                    },
                ):
                    break
            if run.failed:
                break
        if run.failed:
            break
    reports.append(run.report())
    return reports


def coincidence_state_t_identity(cfg: Config, *, types=None, cap=None) -> list[LawReport]:
    """state_t over the identity monad agrees with the direct state monad.

    Compares ret, bind, get and put observationally at every checked
    carrier; the two presentations share their carrier shape, so values
    flow through both sides unchanged.
    """
    types = types if types is not None else cfg.law_types(3)
    from .models import STATE  # section-local import keeps the parameter single-sourced

    direct = base_monad("state", cfg)
    identity = base_monad("identity", cfg)
    layered = state_t(STATE, cfg).apply(identity)
    anchor = "Sect 3.3"
    reports = []

    run = LawRun("statet-identity.ret", anchor)
    for a in types:
        da = direct.obj(a)
        kf = da.key
        for x in a.enum():
            if not run.check(
                kf(layered.ret(x)) == kf(direct.ret(x)),
                lambda a=a, x=x: {"A": a.name, "a": a.key(x)},
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun("statet-identity.bind", anchor)
    for a, b in itertools.product(types, repeat=2):
        da, db = direct.obj(a), direct.obj(b)
        kf = db.key
        fs = fn_pool(run, cfg, a, db, label="f")
        for m, f in cases(run, cfg, pool(run, da), fs, cap=cap):
            if not run.check(
                kf(layered.bind(m, f)) == kf(direct.bind(m, f)),
                lambda a=a, b=b, m=m, f=f, da=da, db=db: {
                    "A": a.name, "B": b.name, "m": da.key(m),
                    "f": describe_fun(f, a, db),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    get_op = sigma_operation("get", cfg)
    put_op = sigma_operation("put", cfg)

    run = LawRun("statet-identity.get", anchor)
    ds = direct.obj(STATE)
    kf = ds.key
    direct_get = get_op.at(STATE)(lambda s: direct.ret(s))
    layered_get = lambda s: identity.ret((s, s))
    run.check(
        kf(layered_get) == kf(direct_get),
        lambda: {"lhs": kf(layered_get), "rhs": kf(direct_get)},
    )
    reports.append(run.report())

    run = LawRun("statet-identity.put", anchor)
    du = direct.obj(UNIT)
    kf = du.key
    for s1 in STATE.enum():
        direct_put = put_op.at(UNIT)((s1, direct.ret(TT)))
        layered_put = lambda s, s1=s1: identity.ret((TT, s1))
        if not run.check(
            kf(layered_put) == kf(direct_put),
            lambda s1=s1: {"s'": s1, "lhs": kf(layered_put), "rhs": kf(direct_put)},
        ):
            break
    reports.append(run.report())
    return reports
