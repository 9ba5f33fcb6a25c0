"""Single-pushout rewriting of graphs attributed by typed lambda terms."""
from . import lambda_core
from .engine import Grammar, LayerEntry, StepLimitExceeded, Trace, make_grammar, replay, run, step
from .graph_model import (
    Attribute,
    Graph,
    attribute,
    build_graph,
    elements_ordered,
    graph_equal,
)
from .morphism import (
    Diagnostic,
    Morphism,
    canonical_retraction,
    compose,
    identity,
    is_injective,
    make_morphism,
    morphisms_equal,
    validate_morphism,
)
from .rewrite import (
    Match,
    PushoutResult,
    RuleScheme,
    apply_rule,
    check_weak_pushout,
    commutes,
    find_matches,
    instantiate,
    make_rule,
    mediating_morphism,
    validate_rule,
    weak_pushout,
)

__version__ = "0.1.0"
