"""Finite-carrier substrate: carriers, functors, natural transformations, monads.

Every law in this package is a forall-statement over types, functions and
computations.  The kernel makes those statements decidable by quantifying
over a small universe of finite carriers and comparing computations
observationally.

Two ideas carry the whole design:

* A ``Carrier`` describes a set of values: it can enumerate inhabitants
  (exhaustively when the set fits the configured budget, otherwise as a
  deterministic seeded sample) and reduce any value to a canonical nested
  tuple via ``key``.  Two values are observationally equal iff their keys
  agree.
* The canonical form *is* the observational-equality strategy.  Atoms
  compare structurally; pairs, sums and lists compare componentwise;
  function-shaped computations are tabulated over their observation
  domain, so state computations are run at every state, environment
  computations at every environment, and continuation computations under
  every enumerated continuation.  The codensity carrier (see the
  codensity module) probes at every budgeted answer type.

Functors act on carriers (``obj``) and on value-level functions (``map``),
so composed functors, transformed monads and signature functors all build
their carriers from the same small kit.  Monad operations are value-level
closures; carriers only enter when a check needs to enumerate or compare.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import zlib
from dataclasses import dataclass, replace

from .report import LawReport, LawRun


class ShapeError(ValueError):
    """Composition of transformations whose functor boundaries disagree."""


class PreconditionError(Exception):
    """An operation was handed an input that fails its documented precondition."""


class LawViolation(Exception):
    """A construction-time law suite found a counterexample."""

    def __init__(self, report: LawReport):
        self.report = report
        super().__init__(f"{report.law_id}: witness={report.witness}")


def derive_seed(seed: int, *labels) -> int:
    """Stable sub-seed for a labeled sampling site; independent of hash randomization."""
    text = str(seed) + "|" + "|".join(str(x) for x in labels)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big")


# ---------------------------------------------------------------------------
# carriers


class Carrier:
    """A named value set with deterministic enumeration and a canonical form.

    ``exhaustive`` says whether ``enum`` lists every inhabitant up to the
    configured bounds; ``open_domain`` says whether runtime values can fall
    outside the enumeration anyway (log monoids keep growing under bind,
    codensity computations are generated, not listed).  Both flags steer
    how table-backed functions treat unlisted arguments.
    """

    name: str
    exhaustive: bool = True
    open_domain: bool = False

    def enum(self) -> list:
        raise NotImplementedError

    def key(self, x):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True, repr=False)
class FiniteType(Carrier):
    """A base carrier: a finite set of atoms, enumerated by listing them."""

    name: str
    values: tuple

    def __post_init__(self):
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"duplicate atoms in {self.name}")

    def enum(self) -> list:
        return list(self.values)

    def key(self, x):
        return x


VOID = FiniteType("Void", ())
UNIT = FiniteType("Unit", ("tt",))
BOOL = FiniteType("Bool", ("b0", "b1"))
TRI = FiniteType("Tri", ("t0", "t1", "t2"))
QUAD = FiniteType("Quad", ("q0", "q1", "q2", "q3"))
DEFAULT_UNIVERSE = (VOID, UNIT, BOOL, TRI, QUAD)

TT = "tt"


@dataclass(frozen=True)
class Config:
    """Budgets and switches shared by every check.

    Enumeration policy: function spaces are exhaustive when |B|^|A| is at
    most ``fn_enum_cap`` and a seeded sample of ``fn_sample`` tables
    otherwise; composite carriers hold at most ``value_cap`` values; each
    law iterates at most ``law_cases`` cases per type combination.  Every
    sampling site derives its own seed from ``seed`` and a fixed label, so
    identical configs replay identical cases.
    """

    seed: int = 0
    max_carrier: int = 4
    fn_enum_cap: int = 256
    fn_sample: int = 32
    value_cap: int = 64
    list_maxlen: int = 3
    law_cases: int = 1024
    build_cases: int = 96
    probe_answer_max: int = 2
    probe_k_cap: int = 256
    probe_k_sample: int = 64
    probe_budget: int = 120_000
    deep_diagrams: bool = False
    enable_callcc: bool = False
    fp_max_len: int = 4
    fp_max_elem: int = 3
    mutants: frozenset = frozenset()

    def universe(self) -> tuple:
        return tuple(t for t in DEFAULT_UNIVERSE if len(t.values) <= self.max_carrier)

    def law_types(self, max_size: int = 3) -> tuple:
        return tuple(t for t in self.universe() if len(t.values) <= max_size)

    def has_mutant(self, name: str) -> bool:
        return name in self.mutants


def quick_config(cfg: Config) -> Config:
    """Reduced-budget profile for --quick runs."""
    return replace(
        cfg,
        fn_sample=8,
        value_cap=24,
        law_cases=160,
        build_cases=48,
        probe_k_cap=32,
        probe_k_sample=12,
        probe_budget=60_000,
    )


class ProductCarrier(Carrier):
    def __init__(self, fst: Carrier, snd: Carrier, cfg: Config):
        self.fst, self.snd = fst, snd
        self.name = f"({fst.name} * {snd.name})"
        xs, ys = fst.enum(), snd.enum()
        self.exhaustive = fst.exhaustive and snd.exhaustive
        self.open_domain = fst.open_domain or snd.open_domain
        self._keymemo: dict = {}
        if len(xs) * len(ys) <= cfg.value_cap:
            self._items = [(x, y) for x in xs for y in ys]
        else:
            rng = random.Random(derive_seed(cfg.seed, "prod", self.name))
            self._items = [(rng.choice(xs), rng.choice(ys)) for _ in range(cfg.value_cap)]
            self.exhaustive = False

    def enum(self) -> list:
        return self._items

    def key(self, x):
        try:
            hit = self._keymemo.get(x)
        except TypeError:
            return (self.fst.key(x[0]), self.snd.key(x[1]))
        if hit is None:
            hit = (self.fst.key(x[0]), self.snd.key(x[1]))
            if len(self._keymemo) < 65536:
                self._keymemo[x] = hit
        return hit


def inl(z):
    return ("inl", z)


def inr(x):
    return ("inr", x)


class SumCarrier(Carrier):
    def __init__(self, left: Carrier, right: Carrier, cfg: Config):
        self.left, self.right = left, right
        self.name = f"({left.name} + {right.name})"
        self._items = [inl(z) for z in left.enum()] + [inr(x) for x in right.enum()]
        self.exhaustive = left.exhaustive and right.exhaustive
        self.open_domain = left.open_domain or right.open_domain
        self._keymemo: dict = {}
        if len(self._items) > cfg.value_cap:
            rng = random.Random(derive_seed(cfg.seed, "sum", self.name))
            self._items = rng.sample(self._items, cfg.value_cap)
            self.exhaustive = False

    def enum(self) -> list:
        return self._items

    def key(self, x):
        try:
            hit = self._keymemo.get(x)
        except TypeError:
            tag, v = x
            return (tag, self.left.key(v) if tag == "inl" else self.right.key(v))
        if hit is None:
            tag, v = x
            hit = (tag, self.left.key(v) if tag == "inl" else self.right.key(v))
            if len(self._keymemo) < 65536:
                self._keymemo[x] = hit
        return hit


class ListCarrier(Carrier):
    """Tuples over an element carrier.

    Enumeration stops at the configured length bound; ``key`` accepts
    longer tuples so values produced by binds stay comparable.  Because
    binds genuinely produce those longer tuples, the carrier is an open
    domain no matter how small the enumeration is.
    """

    def __init__(self, elem: Carrier, cfg: Config, maxlen: int | None = None):
        self.elem = elem
        maxlen = cfg.list_maxlen if maxlen is None else maxlen
        self.name = (
            f"List({elem.name})" if maxlen == cfg.list_maxlen
            else f"List{maxlen}({elem.name})"
        )
        self.open_domain = True
        self._keymemo: dict = {}
        es = elem.enum()
        total = sum(len(es) ** n for n in range(maxlen + 1))
        self.exhaustive = elem.exhaustive
        if total <= cfg.value_cap:
            self._items = [
                t
                for n in range(maxlen + 1)
                for t in itertools.product(es, repeat=n)
            ]
        else:
            rng = random.Random(derive_seed(cfg.seed, "list", self.name))
            self._items = [()]
            seen = {()}
            while len(self._items) < cfg.value_cap:
                t = tuple(rng.choice(es) for _ in range(rng.randint(1, maxlen)))
                if t not in seen:
                    seen.add(t)
                    self._items.append(t)
            self.exhaustive = False

    def enum(self) -> list:
        return self._items

    def key(self, x):
        try:
            hit = self._keymemo.get(x)
        except TypeError:
            return tuple(self.elem.key(v) for v in x)
        if hit is None:
            hit = tuple(self.elem.key(v) for v in x)
            if len(self._keymemo) < 65536:
                self._keymemo[x] = hit
        return hit


class TableFun:
    """Total function between carriers given by an explicit table.

    Lookup goes through the domain's canonical key, so observationally
    equal arguments hit the same entry (table functions are functions of
    the observation, matching pointwise equality).  When the domain is
    itself a sampled carrier the table cannot list every observation;
    unlisted arguments then map through a deterministic extension (a pure
    function of the observation key), which keeps the value a legitimate
    total function.  The same extension applies over open domains, where
    runtime values outgrow any enumeration.  Over a closed exhaustive
    domain a miss is a genuine type error and raises.
    """

    __slots__ = ("dom", "cod", "outputs", "_bykey", "_extend")

    def __init__(self, dom: Carrier, cod: Carrier, outputs):
        self.dom, self.cod = dom, cod
        self.outputs = tuple(outputs)
        self._bykey = {dom.key(d): o for d, o in zip(dom.enum(), self.outputs)}
        self._extend = (not dom.exhaustive) or dom.open_domain

    def __call__(self, x):
        k = self.dom.key(x)
        try:
            return self._bykey[k]
        except KeyError:
            if not self._extend:
                raise
            # pure function of the key, so caching it back is sound
            out = self.outputs[zlib.crc32(repr(k).encode()) % len(self.outputs)]
            self._bykey[k] = out
            return out

    def table(self):
        return [
            [self.dom.key(d), self.cod.key(o)]
            for d, o in zip(self.dom.enum(), self.outputs)
        ]

    def __repr__(self):
        return f"<TableFun {self.dom.name} -> {self.cod.name}>"


def enumerate_functions(dom, cod, cfg, *, cap=None, sample=None, label="fn"):
    """All table functions dom -> cod, or a seeded sample beyond the cap.

    Returns (functions, exhaustive).  An empty domain has exactly one
    function; an empty codomain (with nonempty domain) has none.
    """
    dvals, cvals = dom.enum(), cod.enum()
    if not dvals:
        return [TableFun(dom, cod, ())], True
    if not cvals:
        return [], True
    cap = cfg.fn_enum_cap if cap is None else cap
    sample = cfg.fn_sample if sample is None else sample
    total = len(cvals) ** len(dvals)
    if total <= cap:
        funs = [
            TableFun(dom, cod, outs)
            for outs in itertools.product(cvals, repeat=len(dvals))
        ]
        return funs, dom.exhaustive and cod.exhaustive
    rng = random.Random(derive_seed(cfg.seed, label, dom.name, cod.name))
    funs = [
        TableFun(dom, cod, tuple(rng.choice(cvals) for _ in dvals))
        for _ in range(sample)
    ]
    return funs, False


class FunCarrier(Carrier):
    """Function-space carrier; ``key`` tabulates over the enumerated domain.

    Keys are memoized per function object (holding a strong reference, so
    ids cannot be recycled under the cache).  Law checks probe the same
    enumerated functions thousands of times; without the cache, nested
    function spaces turn each probe into a full re-tabulation.
    """

    _CACHE_CAP = 8192

    def __init__(self, dom: Carrier, cod: Carrier, cfg: Config):
        self.dom, self.cod = dom, cod
        self.name = f"({dom.name} -> {cod.name})"
        self._items, self.exhaustive = enumerate_functions(dom, cod, cfg)
        self._probe = dom.enum()
        # probing an open-valued function can surface observations no
        # enumerated table produced, so openness passes through
        self.open_domain = dom.open_domain or cod.open_domain
        self._keycache: dict[int, tuple] = {}

    def enum(self) -> list:
        return self._items

    def key(self, f):
        hit = self._keycache.get(id(f))
        if hit is not None:
            return hit[1]
        ck = self.cod.key
        k = tuple(ck(f(d)) for d in self._probe)
        if len(self._keycache) < self._CACHE_CAP:
            self._keycache[id(f)] = (f, k)
        return k


def describe_fun(f, dom: Carrier, cod: Carrier):
    """Serializable table for a function value (explicit or by tabulation)."""
    if isinstance(f, TableFun):
        return f.table()
    return [[dom.key(d), cod.key(f(d))] for d in dom.enum()]


# ---------------------------------------------------------------------------
# functors, natural transformations


class Functor:
    def __init__(self, name: str, obj, fmap):
        self.name = name
        self._obj = obj
        self._fmap = fmap
        self._cache: dict[str, Carrier] = {}

    def obj(self, a: Carrier) -> Carrier:
        c = self._cache.get(a.name)
        if c is None:
            c = self._cache[a.name] = self._obj(a)
        return c

    def map(self, f):
        return self._fmap(f)

    def __repr__(self):
        return f"<Functor {self.name}>"


def identity_functor() -> Functor:
    return Functor("Id", lambda a: a, lambda f: f)


def compose_functors(outer: Functor, inner: Functor) -> Functor:
    return Functor(
        f"({outer.name} o {inner.name})",
        lambda a: outer.obj(inner.obj(a)),
        lambda f: outer.map(inner.map(f)),
    )


class NatTrans:
    """Component family between functors, indexed by carrier."""

    def __init__(self, name: str, src: Functor, dst: Functor, component):
        self.name = name
        self.src = src
        self.dst = dst
        self._component = component

    def at(self, a: Carrier):
        return self._component(a)

    def __repr__(self):
        return f"<NatTrans {self.name}: {self.src.name} => {self.dst.name}>"


def identity_nt(functor: Functor) -> NatTrans:
    return NatTrans(f"id[{functor.name}]", functor, functor, lambda a: lambda x: x)


def vcomp(after: NatTrans, before: NatTrans) -> NatTrans:
    """Vertical composition: (after . before), components composed pointwise."""
    if before.dst.name != after.src.name:
        raise ShapeError(
            f"vcomp boundary mismatch: {before.dst.name} vs {after.src.name}"
        )
    return NatTrans(
        f"({after.name} . {before.name})",
        before.src,
        after.dst,
        lambda a: (lambda g, h: (lambda x: g(h(x))))(after.at(a), before.at(a)),
    )


def functor_apply_nt(functor: Functor, n: NatTrans) -> NatTrans:
    """Whiskering: apply a functor to every component of a transformation."""
    return NatTrans(
        f"({functor.name} ## {n.name})",
        compose_functors(functor, n.src),
        compose_functors(functor, n.dst),
        lambda a: functor.map(n.at(a)),
    )


# ---------------------------------------------------------------------------
# quantification helpers


def probe_cost(c: Carrier) -> int:
    """Static estimate of the work to observe one value of this carrier.

    Deterministic (structure-only), so case budgets derived from it keep
    reports reproducible.  Function spaces multiply by their probe width,
    which is what makes continuation towers expensive.
    """
    got = getattr(c, "_probe_cost", None)
    if got is None:
        if isinstance(c, FunCarrier):
            got = max(1, len(c._probe)) * (probe_cost(c.dom) + probe_cost(c.cod))
        elif isinstance(c, ProductCarrier):
            got = probe_cost(c.fst) + probe_cost(c.snd)
        elif isinstance(c, SumCarrier):
            got = 1 + max(probe_cost(c.left), probe_cost(c.right))
        elif isinstance(c, ListCarrier):
            n = max((len(t) for t in c.enum()), default=0)
            got = 1 + n * probe_cost(c.elem)
        else:
            return 1
        c._probe_cost = got
    return got


def weighted_cap(cfg: Config, cap: int, *carriers: Carrier,
                 floor: int = 16, spread: int = 1) -> int:
    """Case budget scaled down by observation cost, never above ``cap``.

    A case over an expensive carrier is itself a wide pointwise check, so
    fewer of them still cover many observations.  ``spread`` divides the
    budget between sibling quantifications (one per type combination) so
    a law's total work stays bounded regardless of how many carriers it
    ranges over.
    """
    cost = max((probe_cost(c) for c in carriers), default=1)
    return min(cap, max(floor, cfg.probe_budget // max(cost * spread, 1)))


def pool(run: LawRun, carrier: Carrier) -> list:
    if not carrier.exhaustive:
        run.sampled()
    return carrier.enum()


def bounded_pool(run: LawRun, cfg: Config, carrier: Carrier) -> list:
    """Pool truncated by observation cost (seeded pick when truncating)."""
    items = pool(run, carrier)
    eff = weighted_cap(cfg, len(items), carrier)
    if eff < len(items):
        run.sampled()
        rng = random.Random(derive_seed(cfg.seed, "bounded", run.law_id, carrier.name))
        items = rng.sample(items, eff)
    return items


def fn_pool(run: LawRun, cfg: Config, dom: Carrier, cod: Carrier, label="fn") -> list:
    funs, exhaustive = enumerate_functions(dom, cod, cfg, label=label)
    if not exhaustive:
        run.sampled()
    return funs


def cases(run: LawRun, cfg: Config, *pools, cap=None, obs=(), spread=1):
    """Cross product of pools, seeded-sampled past the per-law budget.

    ``obs`` names the carriers each case is observed through; expensive
    observations shrink the effective budget via ``weighted_cap``, with
    ``spread`` set to the number of type combinations sharing it.
    """
    sizes = [len(p) for p in pools]
    if any(s == 0 for s in sizes):
        return
    cap = cfg.law_cases if cap is None else cap
    if obs:
        cap = weighted_cap(cfg, cap, *obs, floor=4, spread=spread)
    total = 1
    for s in sizes:
        total *= s
    if total <= cap:
        yield from itertools.product(*pools)
        return
    run.sampled()
    rng = random.Random(derive_seed(cfg.seed, "cases", run.law_id))
    for _ in range(cap):
        yield tuple(rng.choice(p) for p in pools)


def key_diff(a, b, path=()):
    """Path to the first differing observation between two canonical keys."""
    if a == b:
        return None
    if isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b):
        for i, (x, y) in enumerate(zip(a, b)):
            d = key_diff(x, y, path + (i,))
            if d is not None:
                return d
    return {"path": list(path), "lhs": a, "rhs": b}


# ---------------------------------------------------------------------------
# monads


class Monad:
    """Monad on finite carriers: a functor plus value-level ret and bind."""

    def __init__(self, name: str, functor: Functor, ret, bind, provenance=()):
        self.name = name
        self.functor = functor
        self.ret = ret
        self.bind = bind
        self.provenance = tuple(provenance)

    def obj(self, a: Carrier) -> Carrier:
        return self.functor.obj(a)

    def map(self, f):
        return self.functor.map(f)

    def join(self, mm):
        return self.bind(mm, lambda m: m)

    def ret_nt(self) -> NatTrans:
        return NatTrans(
            f"ret[{self.name}]", identity_functor(), self.functor, lambda a: self.ret
        )

    def __repr__(self):
        return f"<Monad {self.name}>"


def check_functor_laws(functor: Functor, cfg: Config, *, label=None, types=None, anchor="plumbing", cap=None):
    """Identity and composition laws, pointwise over enumerated values."""
    label = label or functor.name
    types = types if types is not None else cfg.law_types(3)
    reports = []

    run = LawRun(f"{label}.functor-id", anchor)
    ident = lambda x: x
    for a in types:
        fa = functor.obj(a)
        mapped = functor.map(ident)
        kf = fa.key
        for x in bounded_pool(run, cfg, fa):
            if not run.check(
                kf(mapped(x)) == kf(x),
                lambda a=a, x=x, fa=fa: {"A": a.name, "x": fa.key(x)},
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun(f"{label}.functor-comp", anchor)
    for a, b, c in itertools.product(types, repeat=3):
        fa = functor.obj(a)
        fc = functor.obj(c)
        kf = fc.key
        hs = fn_pool(run, cfg, a, b, label="h")
        gs = fn_pool(run, cfg, b, c, label="g")
        for h, g, x in cases(run, cfg, hs, gs, pool(run, fa), cap=cap,
                             obs=(fc,), spread=len(types) ** 3):
            comp = lambda v: g(h(v))
            ok = kf(functor.map(comp)(x)) == kf(functor.map(g)(functor.map(h)(x)))
            if not run.check(
                ok,
                lambda a=a, b=b, c=c, h=h, g=g, x=x, fa=fa: {
                    "A": a.name, "B": b.name, "C": c.name,
                    "h": h.table(), "g": g.table(), "x": fa.key(x),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())
    return reports


def check_naturality(src: Functor, dst: Functor, component, cfg: Config, *,
                     law_id: str, anchor: str, types=None, cap=None) -> LawReport:
    """Naturality square over every enumerated arrow between universe types."""
    types = types if types is not None else cfg.law_types(3)
    run = LawRun(law_id, anchor)
    for a, b in itertools.product(types, repeat=2):
        sa, db = src.obj(a), dst.obj(b)
        kf = db.key
        comp_a, comp_b = component(a), component(b)
        hs = fn_pool(run, cfg, a, b, label="h")
        for h, x in cases(run, cfg, hs, pool(run, sa), cap=cap,
                          obs=(db,), spread=len(types) ** 2):
            lhs = dst.map(h)(comp_a(x))
            rhs = comp_b(src.map(h)(x))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, b=b, h=h, x=x, sa=sa, lhs=lhs, rhs=rhs: {
                    "A": a.name, "B": b.name, "h": h.table(), "x": sa.key(x),
                    "lhs": kf(lhs), "rhs": kf(rhs),
                },
            ):
                break
        if run.failed:
            break
    return run.report()


def check_monad_laws(monad: Monad, cfg: Config, *, label=None, types=None, cap=None,
                     anchor="plumbing") -> list[LawReport]:
    """The three monad laws, ret naturality, join cancellations, map coherence."""
    label = label or monad.name
    types = types if types is not None else cfg.law_types(3)
    ret, bind = monad.ret, monad.bind
    reports = []

    run = LawRun(f"{label}.left-unit", anchor)
    for a, b in itertools.product(types, repeat=2):
        mb = monad.obj(b)
        kf = mb.key
        fs = fn_pool(run, cfg, a, mb, label="f")
        for x, f in cases(run, cfg, a.enum(), fs, cap=cap,
                          obs=(mb,), spread=len(types) ** 2):
            if not run.check(
                kf(bind(ret(x), f)) == kf(f(x)),
                lambda a=a, b=b, x=x, f=f, mb=mb: {
                    "A": a.name, "B": b.name, "a": a.key(x),
                    "f": describe_fun(f, a, mb),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun(f"{label}.right-unit", anchor)
    for a in types:
        ma = monad.obj(a)
        kf = ma.key
        for m in bounded_pool(run, cfg, ma):
            if not run.check(
                kf(bind(m, ret)) == kf(m),
                lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)},
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    run = LawRun(f"{label}.assoc", anchor)
    for a, b, c in itertools.product(types, repeat=3):
        ma, mb, mc = monad.obj(a), monad.obj(b), monad.obj(c)
        kf = mc.key
        fs = fn_pool(run, cfg, a, mb, label="f")
        gs = fn_pool(run, cfg, b, mc, label="g")
        for m, f, g in cases(run, cfg, pool(run, ma), fs, gs, cap=cap,
                             obs=(mc,), spread=len(types) ** 3):
            lhs = bind(bind(m, f), g)
            rhs = bind(m, lambda x: bind(f(x), g))
            if not run.check(
                kf(lhs) == kf(rhs),
                lambda a=a, b=b, c=c, m=m, f=f, g=g, ma=ma, mb=mb, mc=mc: {
                    "A": a.name, "B": b.name, "C": c.name, "m": ma.key(m),
                    "f": describe_fun(f, a, mb), "g": describe_fun(g, b, mc),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())

    reports.append(
        check_naturality(
            identity_functor(), monad.functor, lambda a: ret, cfg,
            law_id=f"{label}.ret-natural", anchor=anchor, types=types, cap=cap,
        )
    )

    # join . ret = id  and  join . (M # ret) = id
    run = LawRun(f"{label}.join-ret", anchor)
    for a in types:
        ma = monad.obj(a)
        kf = ma.key
        for m in bounded_pool(run, cfg, ma):
            ok = kf(monad.join(ret(m))) == kf(m) and kf(
                monad.join(monad.map(ret)(m))
            ) == kf(m)
            if not run.check(ok, lambda a=a, m=m, ma=ma: {"A": a.name, "m": ma.key(m)}):
                break
        if run.failed:
            break
    reports.append(run.report())

    # the functor action agrees with bind-of-ret (safety net for hand-written maps)
    run = LawRun(f"{label}.map-bind", "plumbing")
    for a, b in itertools.product(types, repeat=2):
        ma, mb = monad.obj(a), monad.obj(b)
        kf = mb.key
        hs = fn_pool(run, cfg, a, b, label="h")
        for m, h in cases(run, cfg, pool(run, ma), hs, cap=cap,
                          obs=(mb,), spread=len(types) ** 2):
            ok = kf(monad.map(h)(m)) == kf(bind(m, lambda x: ret(h(x))))
            if not run.check(
                ok,
                lambda a=a, b=b, m=m, h=h, ma=ma: {
                    "A": a.name, "B": b.name, "m": ma.key(m), "h": h.table(),
                },
            ):
                break
        if run.failed:
            break
    reports.append(run.report())
    return reports


def monad_from_ret_bind(name: str, functor: Functor, ret, bind, cfg: Config, *,
                        anchor="plumbing", check=True) -> Monad:
    """Assemble a monad and refuse to register it if the laws fail.

    The construction-time suite runs with the reduced build budget; the
    full-budget law suites re-run later.  The outcome is recorded in the
    monad's provenance.
    """
    monad = Monad(name, functor, ret, bind)
    if check:
        bcfg = replace(cfg, probe_budget=max(20_000, cfg.probe_budget // 4))
        reports = check_monad_laws(
            monad, bcfg, types=cfg.law_types(2), cap=cfg.build_cases, anchor=anchor
        )
        for r in reports:
            if not r.passed:
                raise LawViolation(r)
        monad.provenance = tuple(reports)
    return monad


def obs_equal(monad: Monad, a: Carrier, x, y):
    """Observational equality at M A; on inequality, the distinguishing path."""
    ma = monad.obj(a)
    kx, ky = ma.key(x), ma.key(y)
    if kx == ky:
        return True, None
    return False, key_diff(kx, ky)
