"""Simply typed lambda calculus with surjective pairing, a terminal type and
inductive types: the attribute language of the graphs."""
from .checker import substitute, typecheck
from .errors import (
    BranchArityMismatch,
    ConstructorArityMismatch,
    FuelExhausted,
    HigherOrderPattern,
    IllTyped,
    IllTypedBinding,
    InductiveDefinitionError,
    LambdaError,
    NonLinearPattern,
    PatternError,
    TypeMismatch,
    UnboundVariable,
    UnknownConstructor,
    UnknownType,
)
from .nbe import (
    DEFAULT_FUEL,
    current_fuel,
    eta_contract,
    fuel_limit,
    normalize,
    normalize_counting,
    observe,
    term_equal,
)
from .pattern import check_pattern, match_pattern, pattern_variables
from .reduction import eta_expand, normalize_by_reduction, reduce
from .syntax import show_term, show_type
from .terms import (
    UNIT,
    App,
    Con,
    Fst,
    Lam,
    Pair,
    Rec,
    Snd,
    Term,
    UnitVal,
    Var,
    alpha_eq,
    app,
    as_numeral,
    free_vars,
    fresh_name,
    lam,
    numeral,
    spine,
    term_size,
)
from .types import (
    EMPTY_ENV,
    Arrow,
    Constructor,
    Context,
    InductiveDef,
    Named,
    Prod,
    T,
    Terminal,
    Type,
    TypeEnv,
    arrow,
    product,
)
