r"""Layered monad interfaces and the state-over-exception run model.

Interfaces are plain data: a name, parent interfaces, the operations
they introduce, and their equations as checkable properties.  A model
implements an interface when every equation in the inheritance closure
passes; there is no type-level subclassing to trust, the closure is
re-discharged on the model itself (the substitution check the class
hierarchy would otherwise promise).

The spine here is

    monad --> stateMonad --> stateRunMonad --> exceptStateRunMonad
      \------> exceptMonad ------------------/

with `run_state` the primitive that observes a stateful computation in
the base monad, one equation per operation it can meet:

    run_state(ret a)        s = ret (a, s)
    run_state(m >>= f)      s = run_state m s >>= (x, s') => run_state (f x) s'
    run_state(get)          s = ret (s, s)
    run_state(put s')       s = ret (tt, s')
    run_state(fail)         s = fail
    run_state(catch m1 m2)  s = catch (run_state m1 s) (run_state m2 s)

The catch equation is the backtracking one: the handler starts from the
state as it was before the protected computation ran.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kernel import (
    BOOL,
    TT,
    Carrier,
    Config,
    LawViolation,
    Monad,
    ProductCarrier,
    UNIT,
    bounded_pool,
    cases,
    enumerate_functions,
    fn_pool,
    inl,
    inr,
)
from .models import base_monad
from .report import LawReport, LawRun
from .transformers import except_t, state_t


@dataclass(frozen=True)
class Equation:
    """One law: a name, the operations it mentions, and a checker.

    ``run`` takes (model, LawRun, cfg) and feeds cases into the run; the
    ``needs`` tuple is what the registry validates against the interface
    closure, so an equation can never mention an operation its interface
    does not inherit.
    """

    name: str
    anchor: str
    needs: tuple
    run: object


@dataclass(frozen=True)
class InterfaceDef:
    name: str
    parents: tuple
    operations: tuple  # (name, arity) pairs introduced here
    equations: tuple


INTERFACES: dict[str, InterfaceDef] = {}


def interface_closure(name: str) -> tuple[InterfaceDef, ...]:
    """Ancestors first, each interface once, the named one last."""
    seen: list[InterfaceDef] = []

    def walk(n: str):
        iface = INTERFACES[n]
        for p in iface.parents:
            walk(p)
        if iface not in seen:
            seen.append(iface)

    walk(name)
    return tuple(seen)


def closure_operations(name: str) -> frozenset:
    ops = frozenset()
    for iface in interface_closure(name):
        ops |= frozenset(op for op, _arity in iface.operations)
    return ops


def _register(iface: InterfaceDef) -> InterfaceDef:
    INTERFACES[iface.name] = iface
    available = closure_operations(iface.name)
    for eq in iface.equations:
        missing = set(eq.needs) - available
        if missing:
            del INTERFACES[iface.name]
            raise ValueError(
                f"equation {eq.name} of {iface.name} references operations "
                f"outside the inheritance closure: {sorted(missing)}"
            )
    return iface


class Model:
    """A monad together with interface operation implementations.

    ``ops`` maps operation names to implementations; the shapes are
    ret: a -> M a, bind: (M a, a -> M b) -> M b, get: M s,
    put: s -> M unit, fail: Carrier -> M a, catch: (M a, M a) -> M a,
    run_state: (M a, s) -> N (a x s).

    ``term_pool`` enumerates the computations the interface's own term
    language can denote at a type.  The catch/fail equations quantify
    over it rather than the raw carrier: with more than one error value
    the carrier contains failures no program can raise, and "catch m
    fail = m" is only a theorem about programs.  The run equations stay
    on the full carrier.
    """

    def __init__(self, name: str, monad: Monad, ops: dict, cfg: Config, *,
                 value_types=None, base: Monad | None = None,
                 s_type: Carrier | None = None, z_type: Carrier | None = None,
                 base_fail=None, base_catch=None, term_pool=None):
        self.name = name
        self.monad = monad
        self.ops = ops
        self.cfg = cfg
        self.value_types = tuple(value_types or (t for t in cfg.universe()
                                                 if 0 < len(t.values) <= 2))
        self.base = base
        self.s_type = s_type
        self.z_type = z_type
        self.base_fail = base_fail
        self.base_catch = base_catch
        self.term_pool = term_pool

    def op(self, name: str):
        return self.ops[name]

    def programs(self, a: Carrier) -> list:
        if self.term_pool is not None:
            return self.term_pool(a)
        return self.monad.obj(a).enum()

    def provides(self, interface: str) -> bool:
        return closure_operations(interface) <= set(self.ops)

    def key(self, a: Carrier):
        return self.monad.obj(a).key

    def run_carrier(self, a: Carrier) -> Carrier:
        return self.base.obj(ProductCarrier(a, self.s_type, self.cfg))

    def __repr__(self):
        return f"<Model {self.name}>"


# monad interface

def _eq_left_unit(model: Model, run: LawRun, cfg: Config):
    ret, bind = model.op("ret"), model.op("bind")
    vt = model.value_types
    for a in vt:
        for b in vt:
            kf = model.key(b)
            fs = fn_pool(run, cfg, a, model.monad.obj(b), label="f")
            for x, f in cases(run, cfg, a.enum(), fs):
                if not run.check(
                    kf(bind(ret(x), f)) == kf(f(x)),
                    lambda a=a, x=x, f=f: {"A": a.name, "a": a.key(x)},
                ):
                    return


def _eq_right_unit(model: Model, run: LawRun, cfg: Config):
    ret, bind = model.op("ret"), model.op("bind")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = ma.key
        for m in bounded_pool(run, cfg, ma):
            if not run.check(
                kf(bind(m, ret)) == kf(m),
                lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)},
            ):
                return


def _eq_assoc(model: Model, run: LawRun, cfg: Config):
    bind = model.op("bind")
    vt = model.value_types
    for a in vt:
        for b in vt:
            for c in vt:
                ma, mb, mc = (model.monad.obj(t) for t in (a, b, c))
                kf = mc.key
                fs = fn_pool(run, cfg, a, mb, label="f")
                gs = fn_pool(run, cfg, b, mc, label="g")
                for m, f, g in cases(run, cfg, ma.enum(), fs, gs,
                                     obs=(mc,), spread=len(vt) ** 3):
                    if not run.check(
                        kf(bind(bind(m, f), g)) == kf(bind(m, lambda x: bind(f(x), g))),
                        lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)},
                    ):
                        return


MONAD = _register(InterfaceDef(
    "monad", (), (("ret", 1), ("bind", 2)),
    (
        Equation("left-unit", "plumbing", ("ret", "bind"), _eq_left_unit),
        Equation("right-unit", "plumbing", ("ret", "bind"), _eq_right_unit),
        Equation("assoc", "plumbing", ("bind",), _eq_assoc),
    ),
))


# stateMonad interface

def _eq_put_put(model: Model, run: LawRun, cfg: Config):
    bind, put = model.op("bind"), model.op("put")
    kf = model.key(UNIT)
    for s1 in model.s_type.enum():
        for s2 in model.s_type.enum():
            if not run.check(
                kf(bind(put(s1), lambda _x, s2=s2: put(s2))) == kf(put(s2)),
                lambda s1=s1, s2=s2: {"s": s1, "s'": s2},
            ):
                return


def _eq_put_get(model: Model, run: LawRun, cfg: Config):
    ret, bind = model.op("ret"), model.op("bind")
    get, put = model.op("get"), model.op("put")
    kf = model.key(model.s_type)
    for s in model.s_type.enum():
        if not run.check(
            kf(bind(put(s), lambda _x: get)) == kf(bind(put(s), lambda _x, s=s: ret(s))),
            lambda s=s: {"s": s},
        ):
            return


def _eq_get_put(model: Model, run: LawRun, cfg: Config):
    ret, bind = model.op("ret"), model.op("bind")
    get, put = model.op("get"), model.op("put")
    kf = model.key(UNIT)
    run.check(kf(bind(get, put)) == kf(ret(TT)), lambda: {})


def _eq_get_get(model: Model, run: LawRun, cfg: Config):
    bind, get = model.op("bind"), model.op("get")
    s2 = ProductCarrier(model.s_type, model.s_type, cfg)
    for b in model.value_types:
        kf = model.key(b)
        for k in fn_pool(run, cfg, s2, model.monad.obj(b), label="k"):
            lhs = bind(get, lambda s, k=k: bind(get, lambda s_, k=k, s=s: k((s, s_))))
            rhs = bind(get, lambda s, k=k: k((s, s)))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda b=b, k=k, s2=s2: {"B": b.name, "k": "tabulated"},
            ):
                return


STATE_MONAD = _register(InterfaceDef(
    "stateMonad", ("monad",), (("get", 0), ("put", 1)),
    (
        Equation("put-put", "Sect 3.1", ("put", "bind"), _eq_put_put),
        Equation("put-get", "Sect 3.1", ("put", "get", "bind", "ret"), _eq_put_get),
        Equation("get-put", "Sect 3.1", ("get", "put", "bind", "ret"), _eq_get_put),
        Equation("get-get", "Sect 3.1", ("get", "bind"), _eq_get_get),
    ),
))


# exceptMonad interface

def _eq_catch_fail_left(model: Model, run: LawRun, cfg: Config):
    fail, catch = model.op("fail"), model.op("catch")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = ma.key
        for m in model.programs(a):
            if not run.check(
                kf(catch(fail(a), m)) == kf(m),
                lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)},
            ):
                return


def _eq_catch_fail_right(model: Model, run: LawRun, cfg: Config):
    fail, catch = model.op("fail"), model.op("catch")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = ma.key
        for m in model.programs(a):
            if not run.check(
                kf(catch(m, fail(a))) == kf(m),
                lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)},
            ):
                return


def _eq_catch_assoc(model: Model, run: LawRun, cfg: Config):
    catch = model.op("catch")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = ma.key
        ms = model.programs(a)
        for m1, m2, m3 in cases(run, cfg, ms, ms, ms, obs=(ma,),
                                spread=len(model.value_types)):
            if not run.check(
                kf(catch(catch(m1, m2), m3)) == kf(catch(m1, catch(m2, m3))),
                lambda a=a, m1=m1, m2=m2, m3=m3, ma=ma: {
                    "A": a.name, "m1": ma.key(m1), "m2": ma.key(m2), "m3": ma.key(m3),
                },
            ):
                return


def _eq_fail_bind(model: Model, run: LawRun, cfg: Config):
    bind, fail = model.op("bind"), model.op("fail")
    vt = model.value_types
    for a in vt:
        for b in vt:
            kf = model.key(b)
            for f in fn_pool(run, cfg, a, model.monad.obj(b), label="f"):
                if not run.check(
                    kf(bind(fail(a), f)) == kf(fail(b)),
                    lambda a=a, b=b: {"A": a.name, "B": b.name},
                ):
                    return


def _eq_catch_ret(model: Model, run: LawRun, cfg: Config):
    ret, catch = model.op("ret"), model.op("catch")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = ma.key
        for x, m in cases(run, cfg, a.enum(), model.programs(a)):
            if not run.check(
                kf(catch(ret(x), m)) == kf(ret(x)),
                lambda a=a, x=x, m=m, ma=ma: {"A": a.name, "a": a.key(x), "m": ma.key(m)},
            ):
                return


EXCEPT_MONAD = _register(InterfaceDef(
    "exceptMonad", ("monad",), (("fail", 0), ("catch", 2)),
    (
        Equation("catch-fail-left", "Sect 4.1", ("fail", "catch"), _eq_catch_fail_left),
        Equation("catch-fail-right", "Sect 4.1", ("fail", "catch"), _eq_catch_fail_right),
        Equation("catch-assoc", "Sect 4.1", ("catch",), _eq_catch_assoc),
        Equation("fail-bind-zero", "Sect 4.1", ("fail", "bind"), _eq_fail_bind),
        Equation("catch-ret", "Sect 4.1", ("ret", "catch"), _eq_catch_ret),
    ),
))


# stateRunMonad interface: run_state meets every inherited operation

def _run_fn_space(model: Model, run: LawRun, cfg: Config, a: Carrier, b: Carrier):
    # the bind equation wants a fully enumerated continuation space at
    # two-point types, so the cap is widened past the default budget
    fs, exhaustive = enumerate_functions(
        a, model.monad.obj(b), cfg,
        cap=max(cfg.fn_enum_cap, 1600), sample=cfg.fn_sample,
        label=f"runbind[{a.name}->{b.name}]",
    )
    if not exhaustive:
        run.sampled()
    return fs


def _eq_run_ret(model: Model, run: LawRun, cfg: Config):
    ret, run_state = model.op("ret"), model.op("run_state")
    base = model.base
    for a in model.value_types:
        kf = model.run_carrier(a).key
        for x in a.enum():
            for s in model.s_type.enum():
                if not run.check(
                    kf(run_state(ret(x), s)) == kf(base.ret((x, s))),
                    lambda a=a, x=x, s=s: {"A": a.name, "a": a.key(x), "s": s},
                ):
                    return


def _eq_run_bind(model: Model, run: LawRun, cfg: Config):
    bind, run_state = model.op("bind"), model.op("run_state")
    base = model.base
    vt = model.value_types
    for a in vt:
        for b in vt:
            ma = model.monad.obj(a)
            kf = model.run_carrier(b).key
            fs = _run_fn_space(model, run, cfg, a, b)
            for m in ma.enum():
                for f in fs:
                    for s in model.s_type.enum():
                        lhs = run_state(bind(m, f), s)
                        rhs = base.bind(run_state(m, s),
                                        lambda p, f=f: run_state(f(p[0]), p[1]))
                        if not run.check(
                            kf(lhs) == kf(rhs),
                            lambda a=a, b=b, m=m, ma=ma, s=s: {
                                "A": a.name, "B": b.name, "m": ma.key(m), "s": s,
                            },
                        ):
                            return


def _eq_run_get(model: Model, run: LawRun, cfg: Config):
    get, run_state = model.op("get"), model.op("run_state")
    base = model.base
    kf = model.run_carrier(model.s_type).key
    for s in model.s_type.enum():
        if not run.check(
            kf(run_state(get, s)) == kf(base.ret((s, s))),
            lambda s=s: {"s": s},
        ):
            return


def _eq_run_put(model: Model, run: LawRun, cfg: Config):
    put, run_state = model.op("put"), model.op("run_state")
    base = model.base
    kf = model.run_carrier(UNIT).key
    for s1 in model.s_type.enum():
        for s in model.s_type.enum():
            if not run.check(
                kf(run_state(put(s1), s)) == kf(base.ret((TT, s1))),
                lambda s1=s1, s=s: {"s'": s1, "s": s},
            ):
                return


STATE_RUN_MONAD = _register(InterfaceDef(
    "stateRunMonad", ("stateMonad",), (("run_state", 2),),
    (
        Equation("run-ret", "Sect 4.1", ("run_state", "ret"), _eq_run_ret),
        Equation("run-bind", "Sect 4.1", ("run_state", "bind"), _eq_run_bind),
        Equation("run-get", "Sect 4.1", ("run_state", "get"), _eq_run_get),
        Equation("run-put", "Sect 4.1", ("run_state", "put"), _eq_run_put),
    ),
))


# exceptStateRunMonad interface: run_state meets fail and catch

def _eq_run_fail(model: Model, run: LawRun, cfg: Config):
    fail, run_state = model.op("fail"), model.op("run_state")
    for a in model.value_types:
        rc = model.run_carrier(a)
        kf = rc.key
        for s in model.s_type.enum():
            if not run.check(
                kf(run_state(fail(a), s)) == kf(model.base_fail(rc)),
                lambda a=a, s=s: {"A": a.name, "s": s},
            ):
                return


def _eq_run_catch(model: Model, run: LawRun, cfg: Config):
    catch, run_state = model.op("catch"), model.op("run_state")
    for a in model.value_types:
        ma = model.monad.obj(a)
        kf = model.run_carrier(a).key
        ms = ma.enum()
        for m1, m2, s in cases(run, cfg, ms, ms, model.s_type.enum(), cap=4096):
            lhs = run_state(catch(m1, m2), s)
            rhs = model.base_catch(run_state(m1, s), run_state(m2, s))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, m1=m1, m2=m2, s=s, ma=ma: {
                    "A": a.name, "m1": ma.key(m1), "m2": ma.key(m2), "s": s,
                },
            ):
                return


EXCEPT_STATE_RUN_MONAD = _register(InterfaceDef(
    "exceptStateRunMonad", ("stateRunMonad", "exceptMonad"), (),
    (
        Equation("run-fail", "Sect 4.1", ("run_state", "fail"), _eq_run_fail),
        Equation("run-catch", "Sect 4.1", ("run_state", "catch"), _eq_run_catch),
    ),
))

RUN_EQUATIONS = STATE_RUN_MONAD.equations + EXCEPT_STATE_RUN_MONAD.equations


def check_equation(model: Model, eq: Equation, cfg: Config, *,
                   law_id: str | None = None) -> LawReport:
    run = LawRun(law_id or eq.name, eq.anchor)
    eq.run(model, run, cfg)
    return run.report()


def check_interface(model: Model, interface: str, cfg: Config, *,
                    prefix: str) -> list[LawReport]:
    """Discharge the full inheritance closure of an interface on a model."""
    reports = []
    for iface in interface_closure(interface):
        for eq in iface.equations:
            reports.append(check_equation(
                model, eq, cfg, law_id=f"{prefix}.{iface.name}.{eq.name}",
            ))
    return reports


def except_model(cfg: Config, z_type: Carrier | None = None) -> Model:
    """The exception monad as an exceptMonad model (failures are inl)."""
    z = z_type or BOOL
    n = except_t(z, cfg).apply(base_monad("identity", cfg))
    z0 = z.enum()[0]
    return Model(
        f"except[{z.name}]", n,
        {
            "ret": n.ret,
            "bind": n.bind,
            "fail": lambda a, z0=z0: inl(z0),
            "catch": lambda n1, n2: n2 if n1[0] == "inl" else n1,
        },
        cfg, z_type=z,
        term_pool=lambda a, z0=z0: [inl(z0)] + [inr(x) for x in a.enum()],
    )


def build_except_state_run_model(cfg: Config, s_type: Carrier | None = None,
                                 z_type: Carrier | None = None, *,
                                 check: bool = True) -> Model:
    """State transformer over the exception monad, with run as application.

    With ``check`` the six run equations are discharged at construction
    and the first failure aborts the build.  Two seeded regressions share
    this entry point: a catch that resumes from the failure-time state
    (the base then records the state inside the error) and a put that
    drops its argument.
    """
    s = s_type or BOOL
    z = z_type or BOOL
    no_backtrack = cfg.has_mutant("catch-no-backtrack")
    err = s if no_backtrack else z
    base = except_t(err, cfg).apply(base_monad("identity", cfg))
    monad = state_t(s, cfg).apply(base)
    z0 = err.enum()[0]

    if cfg.has_mutant("put-stateless"):
        put = lambda s1: lambda s0: base.ret((TT, s0))
    else:
        put = lambda s1: lambda s0: base.ret((TT, s1))

    if no_backtrack:
        fail = lambda a: lambda s0: inl(s0)
        catch = lambda m1, m2: lambda s0: (
            lambda r1: m2(r1[1]) if r1[0] == "inl" else r1
        )(m1(s0))
    else:
        fail = lambda a: lambda s0: inl(z0)
        catch = lambda m1, m2: lambda s0: (
            lambda r1: m2(s0) if r1[0] == "inl" else r1
        )(m1(s0))

    def term_pool(a: Carrier) -> list:
        # every state function into {fail} u ret-images is denotable:
        # branch on get, then put the target state and ret (or fail)
        outcomes = [inl(z0)] + [inr((x, s1)) for x in a.enum() for s1 in s.enum()]
        out = []
        for combo in itertools.product(outcomes, repeat=len(s.values)):
            table = dict(zip((s.key(x) for x in s.enum()), combo))
            out.append(lambda s0, table=table: table[s.key(s0)])
        return out

    model = Model(
        f"stateRun[{s.name},{err.name}]", monad,
        {
            "ret": monad.ret,
            "bind": monad.bind,
            "get": lambda s0: base.ret((s0, s0)),
            "put": put,
            "fail": fail,
            "catch": catch,
            "run_state": lambda m, s0: m(s0),
        },
        cfg,
        base=base, s_type=s, z_type=err,
        base_fail=lambda rc, z0=z0: inl(z0),
        base_catch=lambda n1, n2: n2 if n1[0] == "inl" else n1,
        term_pool=term_pool,
    )
    if check:
        for eq in RUN_EQUATIONS:
            report = check_equation(model, eq, cfg,
                                     law_id=f"{model.name}.{eq.name}")
            if not report.passed:
                raise LawViolation(report)
    return model


def eval_state_t(model: Model, m, s):
    """Project the value out of a run:  run_state(m, s) >>= ret . fst."""
    base = model.base
    return base.bind(model.op("run_state")(m, s), lambda p: base.ret(p[0]))


def check_run_equations(cfg: Config, *, model: Model | None = None) -> list[LawReport]:
    """The six run equations as individual reports (exhaustive at 2-point types)."""
    model = model or build_except_state_run_model(cfg, check=False)
    return [
        check_equation(model, eq, cfg, law_id=f"runstatet.{eq.name}")
        for eq in RUN_EQUATIONS
    ]


def check_backtracking_semantics(model: Model, cfg: Config) -> LawReport:
    """catch(put s1 >> fail)(get) run at s0 must observe s0, not s1."""
    run = LawRun("runstatet.backtracking", "Sect 4.2")
    bind, put, get = model.op("bind"), model.op("put"), model.op("get")
    fail, catch = model.op("fail"), model.op("catch")
    base, s_type = model.base, model.s_type
    kf = model.run_carrier(s_type).key
    for s0 in s_type.enum():
        for s1 in s_type.enum():
            m1 = bind(put(s1), lambda _x: fail(s_type))
            got = model.op("run_state")(catch(m1, get), s0)
            want = base.ret((s0, s0))
            if not run.check(
                kf(got) == kf(want),
                lambda s0=s0, s1=s1, got=got, want=want, kf=kf: {
                    "s0": s0, "s1": s1, "got": kf(got), "want": kf(want),
                },
            ):
                return run.report()
    return run.report()


def check_hierarchy_inheritance(cfg: Config) -> list[LawReport]:
    """Every ancestor interface's equations hold on the combined model.

    The combined state-over-exception model discharges the whole closure
    (monad, state, except, both run layers); the bare exception model
    separately discharges exceptMonad.  Passing parents on the child
    model is the substitution property the interface diagram promises.
    """
    reports = []
    full = build_except_state_run_model(cfg, check=False)
    reports += check_interface(full, "exceptStateRunMonad", cfg,
                               prefix="hierarchy-inheritance.stateRun")
    nmodel = except_model(cfg)
    reports += check_interface(nmodel, "exceptMonad", cfg,
                               prefix="hierarchy-inheritance.except")
    return reports
