"""Law checking for monads, monad transformers, and effect operations
over finite carriers.

Everything an equation needs to be checked mechanically lives here:
finite carriers and function tables (`kernel`), a registry of base
monads and sigma-operations (`models`), transformers and their lift
morphisms (`transformers`), the algebraic-operation lifting chain
(`lifting`), the codensity construction and its lifting (`codensity`),
the state/except interface hierarchy with its RunStateT equations
(`hierarchy`), the fastProduct example program (`fastproduct`), and the
suite registry the `lawcheck` command runs (`suites`).
"""

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
    TT,
    UNIT,
    check_functor_laws,
    check_monad_laws,
    check_naturality,
    enumerate_functions,
    inl,
    inr,
    obs_equal,
    quick_config,
)
from .models import (
    ALGEBRAIC_OPS,
    BASE_MONADS,
    NON_ALGEBRAIC_OPS,
    SigmaOperation,
    algebraicity_check,
    base_monad,
    sigma_operation,
)
from .report import LawReport, LawRun, failed_reports, witness_bytes
from .transformers import (
    FMTS,
    TRANSFORMERS,
    MonadMorphism,
    Transformer,
    check_fmt_laws,
    check_monad_morphism,
    except_t,
    state_t,
    transformer,
)
from .lifting import alifting, phi, psi
from .codensity import codensity, from_morphism, lift_k, slifting
from .hierarchy import (
    INTERFACES,
    Model,
    build_except_state_run_model,
    check_interface,
    interface_closure,
)
from .fastproduct import fast_product, fast_product_rec, product_model
from .suites import (
    MUTANTS,
    SUITES,
    SuiteSelectionError,
    expand_selection,
    run_selection,
    run_suite,
)

__version__ = "0.1.0"
