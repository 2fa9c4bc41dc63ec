"""Base effect monads, their signature operations, and the algebraicity classifier.

Registry names double as CLI identifiers.  Each monad is built through
``monad_from_ret_bind`` (so registration itself re-proves the laws on a
small budget) and each operation is a component family  E(M A) -> M A
whose naturality is checked at construction.

An operation ``op`` is algebraic when for all f : A -> M B and
t : E (M A):

    op A t >>= f  =  op B ((E # (fun m => m >>= f)) t)

``algebraicity_check`` decides that over the finite universe and returns
either an "algebraic" verdict or the first counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .kernel import (
    BOOL,
    Carrier,
    Config,
    FiniteType,
    FunCarrier,
    Functor,
    LawViolation,
    ListCarrier,
    Monad,
    NatTrans,
    PreconditionError,
    ProductCarrier,
    SumCarrier,
    cases,
    check_naturality,
    compose_functors,
    describe_fun,
    fn_pool,
    identity_functor,
    inl,
    inr,
    monad_from_ret_bind,
    pool,
)
from .report import LawReport, LawRun

# default parameters for the effect models: state space, error set,
# environment, answer type, and the output alphabet
STATE = BOOL
ERRORS = BOOL
ENV = BOOL
ANSWER = BOOL
ALPHABET = FiniteType("W2", ("w0", "w1"))

BASE_MONADS = ("identity", "state", "except", "list", "output", "env", "cont")

OP_MONAD = {
    "get": "state",
    "put": "state",
    "fail": "except",
    "handle": "except",
    "output": "output",
    "flush": "output",
    "ask": "env",
    "local": "env",
    "abort": "cont",
    "callcc": "cont",
}
ALGEBRAIC_OPS = ("get", "put", "fail", "output", "ask", "abort")
NON_ALGEBRAIC_OPS = ("handle", "flush", "local")

_monads: dict = {}
_ops: dict = {}


def log_carrier(cfg: Config, maxlen: int | None = None) -> ListCarrier:
    return ListCarrier(ALPHABET, cfg, maxlen=maxlen)


def base_monad(name: str, cfg: Config) -> Monad:
    m = _monads.get((name, cfg))
    if m is None:
        m = _monads[(name, cfg)] = _build_monad(name, cfg)
    return m


def _build_monad(name: str, cfg: Config) -> Monad:
    if name == "identity":
        return monad_from_ret_bind(
            "identity", identity_functor(), lambda a: a, lambda m, f: f(m), cfg,
            anchor="state-exception models",
        )

    if name == "state":
        s = STATE
        functor = Functor(
            f"State[{s.name}]",
            lambda a: FunCarrier(s, ProductCarrier(a, s, cfg), cfg),
            lambda f: lambda m: lambda st: (lambda p: (f(p[0]), p[1]))(m(st)),
        )
        ret = lambda a: lambda st: (a, st)
        bind = lambda m, f: lambda st: (lambda p: f(p[0])(p[1]))(m(st))
        return monad_from_ret_bind("state", functor, ret, bind, cfg, anchor="state model")

    if name == "except":
        z = ERRORS
        functor = Functor(
            f"Except[{z.name}]",
            lambda a: SumCarrier(z, a, cfg),
            lambda f: lambda c: c if c[0] == "inl" else inr(f(c[1])),
        )
        ret = inr
        bind = lambda m, f: m if m[0] == "inl" else f(m[1])
        return monad_from_ret_bind("except", functor, ret, bind, cfg, anchor="exception model")

    if name == "list":
        functor = Functor(
            "List",
            lambda a: ListCarrier(a, cfg),
            lambda f: lambda xs: tuple(f(x) for x in xs),
        )
        ret = lambda a: (a,)
        bind = lambda m, f: tuple(y for x in m for y in f(x))
        return monad_from_ret_bind("list", functor, ret, bind, cfg, anchor="list model")

    if name == "output":
        logs = log_carrier(cfg)
        functor = Functor(
            f"Output[{ALPHABET.name}]",
            lambda a: ProductCarrier(a, logs, cfg),
            lambda f: lambda m: (f(m[0]), m[1]),
        )
        ret = lambda a: (a, ())
        bind = lambda m, f: (lambda p: (p[0], m[1] + p[1]))(f(m[0]))
        return monad_from_ret_bind("output", functor, ret, bind, cfg, anchor="output model")

    if name == "env":
        e = ENV
        functor = Functor(
            f"Env[{e.name}]",
            lambda a: FunCarrier(e, a, cfg),
            lambda f: lambda m: lambda v: f(m(v)),
        )
        ret = lambda a: lambda v: a
        bind = lambda m, f: lambda v: f(m(v))(v)
        return monad_from_ret_bind("env", functor, ret, bind, cfg, anchor="environment model")

    if name == "cont":
        r = ANSWER
        functor = Functor(
            f"Cont[{r.name}]",
            lambda a: FunCarrier(FunCarrier(a, r, cfg), r, cfg),
            lambda f: lambda m: lambda k: m(lambda a: k(f(a))),
        )
        ret = lambda a: lambda k: k(a)
        bind = lambda m, f: lambda k: m(lambda a: f(a)(k))
        return monad_from_ret_bind("cont", functor, ret, bind, cfg, anchor="continuation model")

    raise KeyError(f"unknown monad: {name}")


# ---------------------------------------------------------------------------
# signature operations


class SigmaOperation:
    """Effect operation: a component family E(M A) -> M A, natural in A."""

    def __init__(self, name: str, sig: Functor, monad: Monad, component,
                 cfg: Config, *, anchor: str, check=True):
        self.name = name
        self.sig = sig
        self.monad = monad
        self.anchor = anchor
        self._component = component
        if check:
            bcfg = replace(cfg, probe_budget=max(20_000, cfg.probe_budget // 4))
            report = check_naturality(
                compose_functors(sig, monad.functor), monad.functor, component, bcfg,
                law_id=f"{name}.natural", anchor=anchor,
                types=cfg.law_types(2), cap=cfg.build_cases,
            )
            if not report.passed:
                raise LawViolation(report)

    def at(self, a: Carrier):
        return self._component(a)

    def as_nat_trans(self) -> NatTrans:
        return NatTrans(
            self.name,
            compose_functors(self.sig, self.monad.functor),
            self.monad.functor,
            self._component,
        )

    def __repr__(self):
        return f"<SigmaOperation {self.name} on {self.monad.name}>"


class AlgebraicOperation(SigmaOperation):
    """A sigma-operation packaged with its algebraicity evidence."""

    def __init__(self, op: SigmaOperation, evidence: "AlgebraicityEvidence"):
        self.name = op.name
        self.sig = op.sig
        self.monad = op.monad
        self.anchor = op.anchor
        self._component = op._component
        self.evidence = evidence


@dataclass
class AlgebraicityEvidence:
    op_name: str
    verdict: str            # "algebraic" | "counterexample"
    report: LawReport

    @property
    def counterexample(self):
        return self.report.witness


def sigma_operation(name: str, cfg: Config) -> SigmaOperation:
    op = _ops.get((name, cfg))
    if op is None:
        op = _ops[(name, cfg)] = _build_op(name, cfg)
    return op


def _const_functor(value_carrier: Carrier, label: str) -> Functor:
    return Functor(label, lambda a: value_carrier, lambda f: lambda v: v)


def _build_op(name: str, cfg: Config) -> SigmaOperation:
    monad = base_monad(OP_MONAD[name], cfg)

    if name == "get":
        sig = Functor(
            f"GetSig[{STATE.name}]",
            lambda a: FunCarrier(STATE, a, cfg),
            lambda f: lambda t: lambda s: f(t(s)),
        )
        # get A (k : S -> M A) = fun s => k s s
        component = lambda a: lambda k: lambda s: k(s)(s)
        return SigmaOperation("get", sig, monad, component, cfg, anchor="state ops")

    if name == "put":
        sig = Functor(
            f"PutSig[{STATE.name}]",
            lambda a: ProductCarrier(STATE, a, cfg),
            lambda f: lambda t: (t[0], f(t[1])),
        )
        if cfg.has_mutant("put-stateless"):
            component = lambda a: lambda t: lambda s: t[1](s)
        else:
            # put (s', m) resumes m in the requested state
            component = lambda a: lambda t: lambda s: t[1](t[0])
        return SigmaOperation("put", sig, monad, component, cfg, anchor="state ops")

    if name == "fail":
        sig = _const_functor(ERRORS, f"FailSig[{ERRORS.name}]")
        component = lambda a: lambda z: inl(z)
        return SigmaOperation("fail", sig, monad, component, cfg, anchor="exception ops")

    if name == "handle":
        sig = Functor(
            "HandleSig",
            lambda a: ProductCarrier(a, a, cfg),
            lambda f: lambda t: (f(t[0]), f(t[1])),
        )
        component = lambda a: lambda t: t[0] if t[0][0] == "inr" else t[1]
        return SigmaOperation("handle", sig, monad, component, cfg, anchor="exception ops")

    if name == "output":
        logs = log_carrier(cfg)
        sig = Functor(
            "OutputSig",
            lambda a: ProductCarrier(logs, a, cfg),
            lambda f: lambda t: (t[0], f(t[1])),
        )
        if cfg.has_mutant("output-order"):
            component = lambda a: lambda t: (t[1][0], t[1][1] + t[0])
        else:
            # output (w, m): prefix the chunk, then m's own log
            component = lambda a: lambda t: (t[1][0], t[0] + t[1][1])
        return SigmaOperation("output", sig, monad, component, cfg, anchor="output ops")

    if name == "flush":
        sig = Functor("FlushSig", lambda a: a, lambda f: f)
        component = lambda a: lambda m: (m[0], ())
        return SigmaOperation("flush", sig, monad, component, cfg, anchor="output ops")

    if name == "ask":
        sig = Functor(
            f"AskSig[{ENV.name}]",
            lambda a: FunCarrier(ENV, a, cfg),
            lambda f: lambda t: lambda e: f(t(e)),
        )
        component = lambda a: lambda k: lambda e: k(e)(e)
        return SigmaOperation("ask", sig, monad, component, cfg, anchor="environment ops")

    if name == "local":
        sig = Functor(
            f"LocalSig[{ENV.name}]",
            lambda a: ProductCarrier(FunCarrier(ENV, ENV, cfg), a, cfg),
            lambda f: lambda t: (t[0], f(t[1])),
        )
        component = lambda a: lambda t: lambda e: t[1](t[0](e))
        return SigmaOperation("local", sig, monad, component, cfg, anchor="environment ops")

    if name == "abort":
        sig = _const_functor(ANSWER, f"AbortSig[{ANSWER.name}]")
        component = lambda a: lambda r: lambda k: r
        return SigmaOperation("abort", sig, monad, component, cfg, anchor="continuation ops")

    if name == "callcc":
        if not cfg.enable_callcc:
            raise PreconditionError("callcc is gated behind enable_callcc")
        r = ANSWER
        sig = Functor(
            f"CallccSig[{r.name}]",
            lambda a: FunCarrier(FunCarrier(a, r, cfg), a, cfg),
            lambda f: lambda t: lambda k: f(t(lambda x: k(f(x)))),
        )
        component = lambda a: lambda t: lambda k: t(lambda m: m(k))(k)
        return SigmaOperation("callcc", sig, monad, component, cfg, anchor="continuation ops")

    raise KeyError(f"unknown operation: {name}")


def output_operation_swapped(cfg: Config) -> SigmaOperation:
    """The pre-fix argument order (m's log first); kept as a regression probe."""
    monad = base_monad("output", cfg)
    logs = log_carrier(cfg)
    sig = Functor(
        "OutputSigSwapped",
        lambda a: ProductCarrier(logs, a, cfg),
        lambda f: lambda t: (t[0], f(t[1])),
    )
    component = lambda a: lambda t: (t[1][0], t[1][1] + t[0])
    return SigmaOperation(
        "output-swapped", sig, monad, component, cfg, anchor="output ops footnote"
    )


def algebraicity_check(op: SigmaOperation, cfg: Config, *, types=None) -> AlgebraicityEvidence:
    """Decide algebraicity over the finite universe; first counterexample wins."""
    monad, sig = op.monad, op.sig
    types = types if types is not None else cfg.law_types(2)
    run = LawRun(f"{op.name}.algebraic", op.anchor)
    for a in types:
        for b in types:
            ma, mb = monad.obj(a), monad.obj(b)
            ea = sig.obj(ma)
            kf = mb.key
            op_a, op_b = op.at(a), op.at(b)
            fs = fn_pool(run, cfg, a, mb, label="f")
            for t, f in cases(run, cfg, pool(run, ea), fs,
                              obs=(mb,), spread=len(types) ** 2):
                lhs = monad.bind(op_a(t), f)
                rhs = op_b(sig.map(lambda m: monad.bind(m, f))(t))
                if not run.check(
                    kf(lhs) == kf(rhs),
                    lambda a=a, b=b, t=t, f=f, ea=ea, ma=ma, mb=mb, lhs=lhs, rhs=rhs: {
                        "A": a.name, "B": b.name, "t": ea.key(t),
                        "f": describe_fun(f, a, mb),
                        "lhs": kf(lhs), "rhs": kf(rhs),
                    },
                ):
                    break
            if run.failed:
                break
        if run.failed:
            break
    report = run.report()
    verdict = "algebraic" if report.passed else "counterexample"
    return AlgebraicityEvidence(op.name, verdict, report)


def as_algebraic(op: SigmaOperation, cfg: Config,
                 evidence: AlgebraicityEvidence | None = None) -> AlgebraicOperation:
    """Tag an operation as algebraic; refuses when the check finds a counterexample."""
    if isinstance(op, AlgebraicOperation):
        return op
    cached = getattr(op, "_as_algebraic", None)
    if cached is not None and evidence is None:
        return cached
    ev = evidence or algebraicity_check(op, cfg)
    if ev.verdict != "algebraic":
        raise PreconditionError(
            f"{op.name} is not algebraic; counterexample: {ev.counterexample}"
        )
    tagged = AlgebraicOperation(op, ev)
    op._as_algebraic = tagged
    return tagged
