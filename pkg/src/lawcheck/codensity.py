"""The codensity transform and the lifting of arbitrary operations.

A codensity computation over M at A is a continuation-polymorphic
family: it accepts *any* answer carrier B together with k : A -> M B
and produces an M B.  The carrier observes such values by probing with
small answer types and a budgeted set of continuations; two values are
equal when every probe agrees.

Everything becomes algebraic here: ``kappa`` turns an operation family
op : E(M A) -> M A into a generic effect  E => K(M)  by

    kappa(op) s = (B, k) |-> op_B ((E # k) s)

and ``psik(op) = psi(kappa(op))`` is an algebraic operation on K(M)
even when op itself is not.  ``from_nt`` evaluates a computation at its
own type with the return continuation; round-tripping recovers op:

    from . psik(op) . (E # liftK)  =  op.

mk-naturality is the price of entry for ``from_nt``: a family c must
satisfy  bind(c(B,k), h) = c(B', fun a => bind(k a, h)); library-built
values (ret/bind/lift images) carry a ``trusted`` flag and skip the
check, foreign values are checked first.

For a functorial transformer t the codensity route lifts *any*
operation to t(M):

    slifting(op) = Hmap t(from) . alifting(psik op, Lift t) . (E # Hmap t(liftK))

which agrees with the direct algebraic lifting whenever op was
algebraic to begin with.
"""

from __future__ import annotations

from .kernel import (
    Carrier,
    Config,
    Functor,
    Monad,
    NatTrans,
    PreconditionError,
    bounded_pool,
    cases,
    check_naturality,
    compose_functors,
    describe_fun,
    enumerate_functions,
    fn_pool,
    monad_from_ret_bind,
    probe_cost,
)
from .lifting import (
    alifting,
    operation_coherence_square,
    pointwise_equal_ops,
    psi,
)
from .models import (
    ALGEBRAIC_OPS,
    NON_ALGEBRAIC_OPS,
    SigmaOperation,
    base_monad,
    sigma_operation,
)
from .report import LawReport, LawRun
from .transformers import FMTS, MonadMorphism, Transformer, transformer

DEFAULT_OPS = ALGEBRAIC_OPS + NON_ALGEBRAIC_OPS

_kmonads: dict = {}
_ktrans: dict = {}
_kfroms: dict = {}
_psiks: dict = {}


class KComp:
    """A continuation-polymorphic computation: (B, k : A -> M B) -> M B.

    ``trusted`` marks values assembled from the library's own ret, bind,
    map and lift; ``from_nt`` takes those at face value and runs the
    mk-naturality precondition on everything else.
    """

    __slots__ = ("run", "trusted")

    def __init__(self, run, trusted: bool = True):
        self.run = run
        self.trusted = trusted

    def __call__(self, b: Carrier, k):
        return self.run(b, k)

    def __repr__(self):
        tag = "trusted" if self.trusted else "foreign"
        return f"<KComp {tag}>"


class CodensityCarrier(Carrier):
    """Probing carrier for KComp values at a fixed type over a fixed monad.

    The canonical key evaluates a value under every (answer type,
    continuation) probe in the budget: small answer carriers, with the
    continuation space enumerated exhaustively under the cap and
    seeded-sampled beyond it.  Generated values always outgrow any
    enumeration, so the carrier is open by construction.
    """

    exhaustive = False
    open_domain = True
    _CACHE_CAP = 8192

    def __init__(self, monad: Monad, a: Carrier, cfg: Config):
        self.monad = monad
        self.a = a
        self.name = f"K[{monad.name}]({a.name})"
        self._probes = []
        cost = 1
        for b in cfg.universe():
            if len(b.values) > cfg.probe_answer_max:
                continue
            mb = monad.obj(b)
            ks, _ = enumerate_functions(
                a, mb, cfg,
                cap=cfg.probe_k_cap, sample=cfg.probe_k_sample,
                label=f"kprobe[{self.name}][{b.name}]",
            )
            kf = mb.key
            for k in ks:
                self._probes.append((b, k, kf))
                cost += probe_cost(mb) + 1
        self._probe_cost = cost
        self._items = [lift_value(monad, m) for m in monad.obj(a).enum()]
        self._keycache: dict[int, tuple] = {}

    def enum(self) -> list:
        return self._items

    def key(self, c):
        hit = self._keycache.get(id(c))
        if hit is not None:
            return hit[1]
        k = tuple(kf(c(b, kont)) for b, kont, kf in self._probes)
        if len(self._keycache) < self._CACHE_CAP:
            self._keycache[id(c)] = (c, k)
        return k


def lift_value(monad: Monad, m) -> KComp:
    """Embed an M-computation:  liftK(m) = (B, k) |-> bind(m, k)."""
    return KComp(lambda b, k: monad.bind(m, k))


def codensity(monad: Monad, cfg: Config) -> Monad:
    """The codensity monad over a base monad, with probing carriers."""
    km = _kmonads.get((monad.name, cfg))
    if km is None:
        km = _kmonads[(monad.name, cfg)] = _build_codensity(monad, cfg)
    return km


def _build_codensity(monad: Monad, cfg: Config) -> Monad:
    name = f"K[{monad.name}]"
    functor = Functor(
        name,
        lambda a: CodensityCarrier(monad, a, cfg),
        lambda f: lambda c: KComp(
            lambda b, k: c(b, lambda x: k(f(x))), c.trusted
        ),
    )
    ret = lambda x: KComp(lambda b, k: k(x))
    bind = lambda c, f: KComp(
        lambda b, k: c(b, lambda x: f(x)(b, k)), c.trusted
    )
    return monad_from_ret_bind(name, functor, ret, bind, cfg, anchor="codensity monad")


def codensity_transformer(cfg: Config) -> Transformer:
    """The codensity construction as a plain transformer (no hmap)."""
    t = _ktrans.get(cfg)
    if t is None:
        t = _ktrans[cfg] = Transformer(
            "codensityT", cfg,
            lambda base: codensity(base, cfg),
            lambda base: lambda a: lambda m: lift_value(base, m),
        )
    return t


def lift_k(monad: Monad, cfg: Config) -> MonadMorphism:
    """liftK as a checked monad morphism  M => K(M)."""
    return codensity_transformer(cfg).lift(monad)


def _rotation(a: Carrier):
    vals = a.enum()
    if not vals:
        return lambda x: x
    index = {a.key(v): i for i, v in enumerate(vals)}
    return lambda x: vals[(index[a.key(x)] + 1) % len(vals)]


def run_from(c: KComp, a: Carrier, monad: Monad, cfg: Config):
    """Collapse a computation at its own type:  from(c) = c(A, ret)."""
    if cfg.has_mutant("from-rot"):
        rot = _rotation(a)
        return c(a, lambda x: monad.ret(rot(x)))
    return c(a, monad.ret)


def mk_naturality_holds(c: KComp, a: Carrier, monad: Monad, cfg: Config,
                        run: LawRun | None = None):
    """The continuation-naturality condition for a single value.

    bind(c(B, k), h) = c(B', fun x => bind(k x, h))  over the probe-sized
    answer types.  Returns (ok, witness).
    """
    probe = LawRun(run.law_id if run else "mk", "Sect 6.2")
    types = [b for b in cfg.universe() if len(b.values) <= cfg.probe_answer_max]
    for b1 in types:
        for b2 in types:
            mb1, mb2 = monad.obj(b1), monad.obj(b2)
            kf = mb2.key
            ks = fn_pool(probe, cfg, a, mb1, label="k")
            hs = fn_pool(probe, cfg, b1, mb2, label="h")
            for k, h in cases(probe, cfg, ks, hs, obs=(mb2,), spread=len(types) ** 2):
                lhs = monad.bind(c(b1, k), h)
                rhs = c(b2, lambda x: monad.bind(k(x), h))
                if kf(lhs) != kf(rhs):
                    witness = {
                        "B": b1.name, "B'": b2.name,
                        "k": describe_fun(k, a, mb1),
                        "h": describe_fun(h, b1, mb2),
                        "lhs": kf(lhs), "rhs": kf(rhs),
                    }
                    if run is not None:
                        run.cases += probe.cases
                        if not probe.exhaustive:
                            run.sampled()
                    return False, witness
    if run is not None:
        run.cases += probe.cases
        if not probe.exhaustive:
            run.sampled()
    return True, None


def from_value(c: KComp, a: Carrier, monad: Monad, cfg: Config):
    """from_nt on one value; foreign values must pass mk-naturality."""
    if not c.trusted:
        ok, witness = mk_naturality_holds(c, a, monad, cfg)
        if not ok:
            raise PreconditionError(
                f"from_nt applied to a non-mk-natural value at {a.name}: {witness}"
            )
    return run_from(c, a, monad, cfg)


def from_morphism(monad: Monad, cfg: Config) -> MonadMorphism:
    """from_nt as a checked monad morphism  K(M) => M  (trusted values)."""
    e = _kfroms.get((monad.name, cfg))
    if e is None:
        km = codensity(monad, cfg)
        e = _kfroms[(monad.name, cfg)] = MonadMorphism(
            f"from[{monad.name}]", km, monad,
            lambda a: lambda c: run_from(c, a, monad, cfg),
            cfg, anchor="codensity collapse",
        )
    return e


def kappa(op: SigmaOperation, cfg: Config) -> NatTrans:
    """Generic effect of an arbitrary operation, valued in K(M)."""
    monad, sig = op.monad, op.sig
    km = codensity(monad, cfg)

    def component(a):
        emb = sig.map  # applied per continuation below
        op_at = op.at

        def go(s):
            return KComp(lambda b, k: op_at(b)(emb(k)(s)))

        return go

    return NatTrans(f"kappa[{op.name}]", sig, km.functor, component)


def psik(op: SigmaOperation, cfg: Config) -> SigmaOperation:
    """The operation transported to the codensity monad; always algebraic."""
    got = _psiks.get((op.name, op.monad.name, cfg))
    if got is None:
        km = codensity(op.monad, cfg)
        got = _psiks[(op.name, op.monad.name, cfg)] = psi(
            kappa(op, cfg), km, cfg,
            name=f"psik[{op.name}]", anchor="codensity lifting",
        )
    return got


def check_from_roundtrip(cfg: Config, *, op_names=None) -> list[LawReport]:
    """from . psik(op) . (E # liftK) = op, for every registered operation."""
    reports = []
    types = cfg.law_types(2)
    for name in (op_names or DEFAULT_OPS):
        op = sigma_operation(name, cfg)
        monad, sig = op.monad, op.sig
        lk = lift_k(monad, cfg)
        frm = from_morphism(monad, cfg)
        pk = psik(op, cfg)
        run = LawRun(f"prop26.{name}", "Prop 26")
        for a in types:
            ma = monad.obj(a)
            ea = sig.obj(ma)
            kf = ma.key
            emb = sig.map(lk.at(a))
            pk_a, frm_a, op_a = pk.at(a), frm.at(a), op.at(a)
            for t in bounded_pool(run, cfg, ea):
                lhs = frm_a(pk_a(emb(t)))
                rhs = op_a(t)
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


def check_mk_naturality(cfg: Config,
                        base_names=("identity", "state", "except")) -> list[LawReport]:
    """Library-built computations satisfy continuation naturality.

    Pools take the lifted enumeration plus bind images, so the checked
    values include ones no enumeration lists.
    """
    reports = []
    types = cfg.law_types(2)
    for base_name in base_names:
        monad = base_monad(base_name, cfg)
        km = codensity(monad, cfg)
        run = LawRun(f"naturality-mk.{base_name}", "Sect 6.2")
        for a in types:
            ka = km.obj(a)
            vals = list(bounded_pool(run, cfg, ka))
            fs = fn_pool(run, cfg, a, ka, label="f")
            for i, f in enumerate(fs[:4]):
                if vals:
                    vals.append(km.bind(vals[i % len(vals)], f))
            for c in vals:
                ok, witness = mk_naturality_holds(c, a, monad, cfg, run)
                if not run.check(ok, lambda witness=witness, a=a: dict(witness or {}, A=a.name)):
                    break
            if run.failed:
                break
        reports.append(run.report())
    return reports


def slifting(op: SigmaOperation, fmt, cfg: Config) -> SigmaOperation:
    """Codensity lifting of an arbitrary operation through an FMT."""
    monad, sig = op.monad, op.sig
    km = codensity(monad, cfg)
    pk = psik(op, cfg)
    lifted = alifting(pk, fmt.lift(km), cfg, check=False)
    h_from = fmt.hmap(km, monad, from_morphism(monad, cfg).as_nat_trans())
    h_liftk = fmt.hmap(monad, km, lift_k(monad, cfg).as_nat_trans())
    tm = fmt.apply(monad)

    def component(a):
        emb = sig.map(h_liftk.at(a))
        mid = lifted.at(a)
        post = h_from.at(a)
        return lambda t: post(mid(emb(t)))

    return SigmaOperation(
        f"slifting[{op.name}]({tm.name})", sig, tm, component, cfg,
        anchor="Thm 27", check=False,
    )


def check_codensity_lifting(cfg: Config, *, op_names=None,
                            fmt_names=None) -> list[LawReport]:
    """slifting produces a natural operation that the lift commutes with.

    Runs for every registered operation, algebraic or not, through every
    functorial transformer.
    """
    reports = []
    types = cfg.law_types(2)
    for t_name in (fmt_names or FMTS):
        fmt = transformer(t_name, cfg)
        for op_name in (op_names or DEFAULT_OPS):
            op = sigma_operation(op_name, cfg)
            label = f"thm27.{t_name}.{op_name}"
            slifted = slifting(op, fmt, cfg)
            tm = slifted.monad

            reports.append(
                check_naturality(
                    compose_functors(slifted.sig, tm.functor), tm.functor,
                    slifted.at, cfg,
                    law_id=f"{label}.natural", anchor="Thm 27", types=types,
                )
            )
            reports.append(
                operation_coherence_square(
                    label, op, fmt.lift(op.monad), slifted, cfg, types,
                    anchor="Thm 27",
                )
            )
    return reports


def check_slifting_agreement(cfg: Config, *, op_names=None,
                             fmt_names=None) -> list[LawReport]:
    """On algebraic operations the codensity route equals the direct one."""
    reports = []
    types = cfg.law_types(2)
    for t_name in (fmt_names or FMTS):
        fmt = transformer(t_name, cfg)
        for op_name in (op_names or ALGEBRAIC_OPS):
            op = sigma_operation(op_name, cfg)
            direct = alifting(op, fmt.lift(op.monad), cfg, check=False)
            via_k = slifting(op, fmt, cfg)
            run = LawRun(f"prop28.{t_name}.{op_name}", "Prop 28")
            pointwise_equal_ops(run, via_k, direct, cfg, types)
            reports.append(run.report())
    return reports
