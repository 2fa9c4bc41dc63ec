"""A list-product program written against the interface, not the model.

The program multiplies a list of naturals into the state and bails out
through fail on a zero, with a catch wrapper that turns the failure
into the answer 0.  Everything below touches only the operation names
an exceptStateRunMonad model exposes (ret, bind, get, put, fail, catch,
run_state); the module never sees how the model represents
computations.  Correctness is judged against math.prod, which knows
nothing about monads.
"""

from __future__ import annotations

import itertools
import math

from .hierarchy import Model, build_except_state_run_model, eval_state_t
from .kernel import Config, FiniteType, PreconditionError, TT, UNIT
from .report import LawReport, LawRun

# hard bounds on the program itself; the checked sweep below stays well
# inside them and the CLI flags can push the sweep up to these
PROGRAM_MAX_ELEM = 5
PROGRAM_MAX_LEN = 8


def nat_carrier(cap: int) -> FiniteType:
    """Naturals 0..cap as a state carrier."""
    return FiniteType(f"Nat{cap}", tuple(range(cap + 1)))


def _guard(l) -> None:
    if len(l) > PROGRAM_MAX_LEN:
        raise PreconditionError(
            f"list of length {len(l)} exceeds the program bound {PROGRAM_MAX_LEN}"
        )
    for n in l:
        if not (0 <= n <= PROGRAM_MAX_ELEM):
            raise PreconditionError(
                f"element {n} outside 0..{PROGRAM_MAX_ELEM}"
            )


def fast_product_rec(model: Model, l):
    """Multiply the list into the state; a zero aborts the whole walk.

    empty       -> ret tt
    0 :: _      -> fail
    n :: rest   -> get >>= (m => put (m * n)) >> recurse on rest
    """
    _guard(l)
    ret, bind = model.op("ret"), model.op("bind")
    get, put = model.op("get"), model.op("put")
    if not l:
        return ret(TT)
    n, rest = l[0], l[1:]
    if n == 0:
        return model.op("fail")(UNIT)
    return bind(get, lambda m: bind(put(m * n),
                                    lambda _x: fast_product_rec(model, rest)))


def fast_product(model: Model, l):
    """catch(put 1 >> walk the list >> get, ret 0)."""
    _guard(l)
    ret, bind = model.op("ret"), model.op("bind")
    put, get = model.op("put"), model.op("get")
    body = bind(put(1), lambda _x: bind(fast_product_rec(model, l),
                                        lambda _y: get))
    return model.op("catch")(body, ret(0))


def product_model(cfg: Config, *, max_len: int | None = None,
                  max_elem: int | None = None) -> Model:
    """Run model whose state covers every product the sweep can reach."""
    max_len = cfg.fp_max_len if max_len is None else max_len
    max_elem = cfg.fp_max_elem if max_elem is None else max_elem
    cap = max(1, max_elem) ** max_len
    return build_except_state_run_model(
        cfg, s_type=nat_carrier(cap), check=False,
    )


def check_fast_product_correct(cfg: Config, *, max_len: int | None = None,
                               max_elem: int | None = None) -> LawReport:
    """eval(fast_product l, n) = ret(product l) for every list and start state.

    Lists range over all lengths up to the bound with elements 0..max_elem;
    the product oracle is an independent pure fold.
    """
    max_len = cfg.fp_max_len if max_len is None else max_len
    max_elem = cfg.fp_max_elem if max_elem is None else max_elem
    run = LawRun("fastproduct.correct", "Sect 4.2 / App A.1")
    model = product_model(cfg, max_len=max_len, max_elem=max_elem)
    base = model.base
    kf = base.obj(model.s_type).key
    for length in range(max_len + 1):
        for l in itertools.product(range(max_elem + 1), repeat=length):
            prog = fast_product(model, list(l))
            want = kf(base.ret(math.prod(l)))
            for n in model.s_type.enum():
                got = eval_state_t(model, prog, n)
                if not run.check(
                    kf(got) == want,
                    lambda l=l, n=n, got=got, want=want, kf=kf: {
                        "l": list(l), "n": n, "got": kf(got), "want": want,
                    },
                ):
                    return run.report()
    return run.report()


def check_rec_behavior(cfg: Config) -> LawReport:
    """The three recursion clauses, observed through run_state.

    empty list is ret; a leading zero is fail; [2,3] from state 1 walks
    the state to 6 (the worked trace for the head clause).
    """
    run = LawRun("fastproduct.rec", "Sect 4.2")
    model = product_model(cfg)
    base, s_type = model.base, model.s_type
    run_state = model.op("run_state")
    ret = model.op("ret")
    ku = model.run_carrier(UNIT).key
    ks = model.run_carrier(s_type).key

    for n in s_type.enum():
        got = run_state(fast_product_rec(model, []), n)
        if not run.check(
            ku(got) == ku(run_state(ret(TT), n)),
            lambda n=n: {"clause": "empty", "n": n},
        ):
            return run.report()

        got = run_state(fast_product_rec(model, [0, 3]), n)
        if not run.check(
            ku(got) == ku(run_state(model.op("fail")(UNIT), n)),
            lambda n=n: {"clause": "zero", "n": n},
        ):
            return run.report()

    got = run_state(model.op("bind")(fast_product_rec(model, [2, 3]),
                                     lambda _x: model.op("get")), 1)
    if not run.check(
        ks(got) == ks(base.ret((6, 6))),
        lambda got=got, ks=ks: {"clause": "head", "got": ks(got)},
    ):
        return run.report()
    return run.report()
