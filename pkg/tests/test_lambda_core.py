import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import ADD, CTX, ENV, NAT, BOOL, NATPAIR, OPEN_CTX, TERM_TYPES, random_term
from spograph.frontend import fixture_dir, load_file
from spograph.lambda_core import (
    T,
    UNIT,
    App,
    Arrow,
    BranchArityMismatch,
    Con,
    ConstructorArityMismatch,
    Constructor,
    Context,
    Fst,
    FuelExhausted,
    HigherOrderPattern,
    IllTypedBinding,
    InductiveDefinitionError,
    InductiveDef,
    Lam,
    Named,
    NonLinearPattern,
    Pair,
    Prod,
    Rec,
    Snd,
    TypeEnv,
    TypeMismatch,
    UnboundVariable,
    UnknownConstructor,
    UnknownType,
    Var,
    alpha_eq,
    app,
    as_numeral,
    eta_contract,
    eta_expand,
    free_vars,
    fuel_limit,
    lam,
    match_pattern,
    normalize,
    normalize_by_reduction,
    normalize_counting,
    numeral,
    observe,
    product,
    reduce,
    show_term,
    show_type,
    substitute,
    term_equal,
    typecheck,
)

PRELUDE = load_file(os.path.join(fixture_dir(), "prelude.agr"))
OMEGA = load_file(os.path.join(fixture_dir(), "omegatree.agr"))
FACT = PRELUDE.term("fact").term
MULT = PRELUDE.term("mult").term
PRED = PRELUDE.term("pred").term
S = lambda t: Con("Nat", "Succ", (t,))
P = Context(ENV, (("p", NATPAIR), ("f", Arrow(NAT, NAT)), ("u", T), ("g", Arrow(NATPAIR, NAT))))


def omega(name):
    return OMEGA.term(name).term


# -- types and environments

def test_show_type_precedence():
    assert show_type(Arrow(Arrow(NAT, NAT), NAT)) == "(Nat -> Nat) -> Nat"
    assert show_type(Arrow(NAT, Arrow(NAT, NAT))) == "Nat -> Nat -> Nat"
    assert show_type(product(NAT, BOOL, T)) == "Nat * Bool * T"
    assert show_type(Prod(NAT, Prod(BOOL, T))) == "Nat * (Bool * T)"
    assert show_type(Prod(Arrow(NAT, NAT), NAT)) == "(Nat -> Nat) * Nat"


def test_strict_positivity_rejected():
    bad = Named("Bad")
    with pytest.raises(InductiveDefinitionError):
        TypeEnv([InductiveDef("Bad", [Constructor("Mk", (Arrow(bad, bad),))])])


def test_infinitary_constructor_is_positive():
    assert "Twot" in OMEGA.env
    lim = OMEGA.env.constructor("Lim")[1]
    assert lim.args == (Arrow(NAT, Named("Twot")),)


def test_constructor_names_unique_across_types():
    with pytest.raises(InductiveDefinitionError):
        ENV.declare(InductiveDef("Other", [Constructor("Zero")]))


def test_unknown_type_in_constructor():
    with pytest.raises(UnknownType):
        TypeEnv([InductiveDef("List", [Constructor("Nil"), Constructor("Cons", (Named("Elem"), Named("List")))])])


def test_branch_type_for_infinitary_argument():
    twot = OMEGA.env.lookup("Twot")
    lim = twot.constructor("Lim")
    fam = Arrow(NAT, Named("Twot"))
    assert twot.branch_type(lim, NAT) == Arrow(fam, Arrow(Arrow(NAT, NAT), NAT))


# -- typing

def test_typecheck_basic():
    assert typecheck(CTX, Lam("x", NAT, Var("x"))) == Arrow(NAT, NAT)
    assert typecheck(CTX, ADD) == Arrow(NAT, Arrow(NAT, NAT))
    assert typecheck(P, Pair(Snd(Var("p")), UNIT)) == Prod(NAT, T)
    assert typecheck(CTX, numeral(40320)) == NAT


def test_typecheck_errors():
    with pytest.raises(UnboundVariable):
        typecheck(CTX, Var("nope"))
    with pytest.raises(TypeMismatch):
        typecheck(CTX, App(ADD, Con("Bool", "True")))
    with pytest.raises(TypeMismatch):
        typecheck(CTX, Fst(numeral(1)))
    with pytest.raises(BranchArityMismatch):
        typecheck(CTX, Rec(Arrow(NAT, NAT), (numeral(0),)))
    with pytest.raises(ConstructorArityMismatch):
        typecheck(CTX, Con("Nat", "Succ", ()))
    with pytest.raises(UnknownConstructor):
        typecheck(CTX, Con("Nat", "Two", ()))


def test_type_mismatch_reports_path():
    with pytest.raises(TypeMismatch) as info:
        typecheck(CTX, Lam("x", NAT, App(PRED, Con("Bool", "False"))))
    assert info.value.path == ("body", "arg")


# -- normalization

@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (3, 6), (4, 24), (5, 120), (6, 720)])
def test_factorial_values(n, expected):
    assert as_numeral(normalize(CTX, App(FACT, numeral(n)))) == expected


def test_arithmetic():
    assert as_numeral(normalize(CTX, app(ADD, numeral(2), numeral(3)))) == 5
    assert as_numeral(normalize(CTX, app(MULT, numeral(7), numeral(6)))) == 42
    assert as_numeral(normalize(CTX, App(PRED, numeral(0)))) == 0
    assert as_numeral(normalize(CTX, App(omega("d"), numeral(3)))) == 6


def test_surjective_pairing_example():
    p = Var("p")
    assert normalize(P, Pair(Fst(p), Snd(p))) == p
    assert alpha_eq(normalize(P, p, eta_long=True), Pair(Fst(p), Snd(p)))


def test_eta_for_functions_and_unit():
    f = Var("f")
    assert normalize(P, Lam("x", NAT, App(f, Var("x")))) == f
    assert term_equal(P, Var("u"), UNIT)
    g = Var("g")
    assert term_equal(P, Lam("q", NATPAIR, App(g, Pair(Fst(Var("q")), Snd(Var("q"))))), g)


def test_open_terms_stay_neutral():
    t = normalize(CTX.extend("k", NAT), app(ADD, Var("k"), numeral(2)))
    assert show_term(t) == "Rec[Nat -> Nat](2)(\\k':Nat. \\r:Nat. Succ r) k"
    assert term_equal(CTX.extend("k", NAT), app(ADD, numeral(2), Var("k")), S(S(Var("k"))))


def test_term_equal_distinguishes():
    assert not term_equal(CTX, numeral(3), numeral(4))
    with pytest.raises(TypeMismatch):
        term_equal(CTX, numeral(3), Con("Bool", "True"))


def test_fuel():
    with pytest.raises(FuelExhausted):
        normalize(CTX, App(FACT, numeral(6)), fuel=500)
    with fuel_limit(500):
        with pytest.raises(FuelExhausted):
            normalize(CTX, App(FACT, numeral(6)))
    value, used = normalize_counting(CTX, app(ADD, numeral(2), numeral(3)))
    # 2 beta for m, n; 3 iota on 2, 1, 0; 2 beta per Succ branch
    assert as_numeral(value) == 5 and used == 9


def test_eta_contract_idempotent():
    t = Lam("x", NAT, App(Var("f"), Var("x")))
    assert eta_contract(t) == Var("f")
    assert eta_contract(eta_contract(t)) == Var("f")
    # not an eta redex: the variable occurs in the function part
    keep = Lam("x", NAT, app(ADD, Var("x"), Var("x")))
    assert alpha_eq(eta_contract(keep), keep)


def test_deep_numerals():
    n = numeral(40320)
    assert as_numeral(normalize(CTX, n)) == 40320
    assert as_numeral(normalize(CTX, App(FACT, numeral(8)))) == 40320


# -- second reduction route

def test_reduce_strategies_agree_on_factorial():
    t = App(FACT, numeral(3))
    assert as_numeral(reduce(CTX, t, "outermost")) == 6
    assert as_numeral(reduce(CTX, t, "innermost")) == 6


def test_eta_expand_shapes():
    assert alpha_eq(eta_expand(P, Var("p")), Pair(Fst(Var("p")), Snd(Var("p"))))
    assert eta_expand(P, Var("u")) == UNIT
    assert alpha_eq(eta_expand(P, Var("f")), Lam("x", NAT, App(Var("f"), Var("x"))))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_nbe_agrees_with_reduction(seed):
    rng = random.Random(seed)
    ty = rng.choice(TERM_TYPES)
    t = random_term(rng, ty, depth=rng.randint(1, 4))
    assert typecheck(OPEN_CTX, t) == ty
    expected = normalize(OPEN_CTX, t, eta_long=True)
    for strategy in ("outermost", "innermost"):
        assert alpha_eq(normalize_by_reduction(OPEN_CTX, t, strategy), expected)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_normalize_preserves_type_and_is_idempotent(seed):
    rng = random.Random(seed)
    ty = rng.choice(TERM_TYPES)
    t = random_term(rng, ty)
    nf = normalize(OPEN_CTX, t)
    assert typecheck(OPEN_CTX, nf) == ty
    assert alpha_eq(normalize(OPEN_CTX, nf), nf)
    assert term_equal(OPEN_CTX, t, nf)


# -- substitution

def test_substitution_avoids_capture():
    t = Lam("y", NAT, app(ADD, Var("x"), Var("y")))
    out = substitute(t, {"x": Var("y")})
    assert isinstance(out, Lam) and out.var != "y"
    assert free_vars(out) == {"y"}


def test_substitution_checks_binding_types():
    ctx = CTX.extend("x", NAT)
    with pytest.raises(IllTypedBinding):
        substitute(Var("x"), {"x": Con("Bool", "True")}, ctx)
    assert substitute(Var("x"), {"x": numeral(2)}, ctx) == numeral(2)


# -- patterns

def test_match_pattern():
    assert match_pattern(S(S(Var("y"))), numeral(5)) == {"y": numeral(3)}
    assert match_pattern(S(Var("y")), numeral(0)) is None
    assert match_pattern(Pair(Var("a"), Con("Bool", "True")), Pair(numeral(1), Con("Bool", "True"))) == {"a": numeral(1)}
    assert match_pattern(app(ADD, numeral(1), numeral(1)), numeral(2), CTX) == {}


def test_pattern_restrictions():
    with pytest.raises(NonLinearPattern):
        match_pattern(Pair(Var("x"), Var("x")), Pair(numeral(1), numeral(1)))
    with pytest.raises(HigherOrderPattern):
        match_pattern(App(Var("f"), numeral(1)), numeral(2))


# -- omega trees

def test_tree_branch_lengths():
    tree = omega("tree")
    grow = omega("grow")
    for k in range(6):
        assert term_equal(OMEGA.ctx, observe(OMEGA.ctx, tree, k), App(grow, numeral(k)))


def test_phi_selects_even_branches():
    t = App(omega("phi"), omega("tree"))
    grow = omega("grow")
    for k in range(6):
        assert term_equal(OMEGA.ctx, observe(OMEGA.ctx, t, k), App(grow, numeral(2 * k)))


def test_phi_tree_branch_four_has_length_eight():
    nf = normalize(OMEGA.ctx, omega("phiTreeBranch4"))
    assert show_term(nf) == "SuccW (SuccW (SuccW (SuccW (SuccW (SuccW (SuccW (SuccW Leaf)))))))"
    assert as_numeral(normalize(OMEGA.ctx, omega("phiTreeBranch4Height"))) == 8


def test_phi2_selects_at_every_level():
    nested = omega("nested")
    t = App(omega("phi2"), nested)
    for n in range(4):
        for m in range(4):
            assert term_equal(OMEGA.ctx, observe(OMEGA.ctx, t, n, m), observe(OMEGA.ctx, nested, 2 * n, 2 * m))


def test_phi_only_touches_first_level():
    nested = omega("nested")
    t = App(omega("phi"), nested)
    # one level of selection: branch (n, m) of the result is branch (2n, m)
    assert term_equal(OMEGA.ctx, observe(OMEGA.ctx, t, 1, 1), observe(OMEGA.ctx, nested, 2, 1))


def test_show_term_sugar():
    assert show_term(numeral(12)) == "12"
    assert show_term(App(PRED, S(Var("x")))) == "Rec[Nat -> Nat](0)(\\k:Nat. \\r:Nat. k) (Succ x)"
    assert show_term(Pair(Fst(Var("p")), UNIT)) == "<fst p, unit>"
