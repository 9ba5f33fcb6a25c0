import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import BOOL, CTX, NAT, planted_host, random_morphism, random_rule
from spograph.frontend import fixture_dir, load_file
from spograph.graph_model import build_graph
from spograph.lambda_core import IllTypedBinding, Con, Lam, Var, as_numeral, normalize, numeral
from spograph.morphism import compose, identity, make_morphism, validate_morphism
from spograph.rewrite import (
    MalformedRule,
    NonCommutingChallenge,
    NotTotalInjectiveEmbedding,
    SourceMismatch,
    UnboundPatternVariable,
    apply_rule,
    check_weak_pushout,
    commutes,
    find_matches,
    instantiate,
    make_rule,
    weak_pushout,
)

FX = fixture_dir()
FACT = load_file(os.path.join(FX, "factorial.agr"))
DANGLING = load_file(os.path.join(FX, "dangling.agr"))
MERGE = load_file(os.path.join(FX, "merge.agr"))


def values(G):
    return {x: as_numeral(normalize(G.ctx, G.att(x).term)) for x in G.elements()}


def incidence(G):
    return {e: (G.src(e), G.tgt(e)) for e in G.edges}


def test_lambda_factorial_application():
    m, res = apply_rule(FACT.rule("lambdaFact"), FACT.graph("N4"))
    assert m.sigma == {"x": numeral(4)}
    assert values(res.H) == {1: 24}
    assert res.deleted == ()
    assert res.class_map[1] == frozenset({("G", 1), ("R", 1)})
    assert commutes(res)
    assert validate_morphism(res.r_prime) == [] and validate_morphism(res.i_prime) == []


def test_dangling_edge_removed():
    m, res = apply_rule(DANGLING.rule("dropNat"), DANGLING.graph("Host"))
    H = res.H
    assert list(H.vertices) == [1] and not H.edges
    assert H.att(1).term == Con("Bool", "True")
    assert res.deleted == (1, 3)
    assert res.r_prime.str_map == {2: 1}
    assert commutes(res)


def test_merge_application():
    m, res = apply_rule(MERGE.rule("merge"), MERGE.graph("Host"))
    H = res.H
    assert {v: H.att(v).term for v in H.vertices} == {1: numeral(5), 2: Con("Bool", "True")}
    assert incidence(H) == {3: (1, 2), 4: (1, 2)}
    assert res.r_prime.str_map == {1: 1, 2: 1, 3: 2, 4: 3, 5: 4}
    assert res.i_prime.str_map == {1: 1}
    assert res.class_map[1] == frozenset({("G", 1), ("G", 2), ("R", 1)})
    assert commutes(res)


def test_decrement_step_ids():
    m, res = apply_rule(FACT.rule("decrement"), FACT.graph("N5chain"))
    H = res.H
    assert values(H) == {1: 5, 2: 4, 3: None, 4: None}
    assert incidence(H) == {3: (1, 2), 4: (2, 2)}
    assert res.deleted == (2,)
    assert res.r_prime.str_map == {1: 1}
    assert res.i_prime.str_map == {1: 1, 3: 2, 4: 3, 5: 4}
    Q = res.stages["quotient"]
    assert sorted(Q.vertices) == [1, 2] and sorted(Q.edges) == [3, 4, 5]


def test_match_order_and_sigma():
    matches = find_matches(MERGE.rule("merge"), MERGE.graph("Host"))
    assert [m.targets for m in matches] == [(1, 2), (2, 1)]
    assert [m.sigma for m in matches] == [{"x": numeral(2), "y": numeral(3)}, {"x": numeral(3), "y": numeral(2)}]


def test_no_match():
    assert find_matches(FACT.rule("stop"), FACT.graph("N5chain")) == []
    assert apply_rule(FACT.rule("stop"), FACT.graph("N5chain")) is None


def test_shared_variable_must_agree():
    ctx = CTX.extend("x", NAT)
    L = build_graph([(1, Var("x"), NAT), (2, Var("x"), NAT)], [], ctx)
    rule = make_rule("twins", L, L, {1: 1, 2: 2})
    G = build_graph([(1, numeral(2), NAT), (2, numeral(3), NAT), (3, numeral(2), NAT)], [], CTX)
    assert [m.targets for m in find_matches(rule, G)] == [(1, 3), (3, 1)]


def test_edges_must_follow_incidence():
    L = build_graph([(1,), (2,)], [(3, 1, 2)], CTX)
    rule = make_rule("arrow", L, L, {1: 1, 2: 2, 3: 3})
    G = build_graph([(1,), (2,), (3,)], [(4, 2, 1), (5, 2, 3)], CTX)
    assert [m.targets for m in find_matches(rule, G)] == [(2, 1, 4), (2, 3, 5)]


def test_instantiate_errors():
    rule = MERGE.rule("merge")
    with pytest.raises(UnboundPatternVariable):
        instantiate(rule, {"x": numeral(1)})
    with pytest.raises(IllTypedBinding):
        instantiate(rule, {"x": numeral(1), "y": Con("Bool", "True")})
    inst = instantiate(rule, {"x": numeral(1), "y": numeral(2)})
    assert inst.rhs.att(1).term == numeral(3)


def test_value_incompatible_rule_rejected():
    ctx = CTX.extend("x", NAT)
    L = build_graph([(1, Var("x"), NAT)], [], ctx)
    R = build_graph([(1, Con("Nat", "Succ", (Var("x"),)), NAT)], [], ctx)
    with pytest.raises(MalformedRule):
        make_rule("bad", L, R, {1: 1})


def test_embedding_must_be_injective():
    rule = FACT.rule("lambdaFact")
    inst = instantiate(rule, {"x": numeral(2)})
    G = build_graph([(1, numeral(2), NAT)], [], CTX)
    i = make_morphism(inst.lhs, G, {})
    with pytest.raises(NotTotalInjectiveEmbedding):
        weak_pushout(inst.morphism, i)
    other = build_graph([(1, numeral(3), NAT)], [], CTX)
    with pytest.raises(SourceMismatch):
        weak_pushout(inst.morphism, make_morphism(other, G, {1: 1}))


def test_non_commuting_challenge_rejected():
    m, res = apply_rule(FACT.rule("lambdaFact"), FACT.graph("N3"))
    X = build_graph([(1, numeral(0), NAT)], [], CTX)
    h = make_morphism(res.r.target, X, {1: 1}, cmp={1: Lam("x", NAT, numeral(0))})
    g = make_morphism(res.i.target, X, {})
    with pytest.raises(NonCommutingChallenge):
        check_weak_pushout(res.r, res.i, res, h, g)


def test_trivial_challenge():
    m, res = apply_rule(MERGE.rule("merge"), MERGE.graph("Host"))
    assert check_weak_pushout(res.r, res.i, res, res.i_prime, res.r_prime)
    idH = identity(res.H)
    assert check_weak_pushout(res.r, res.i, res, compose(idH, res.i_prime), compose(idH, res.r_prime))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_random_applications_commute(seed):
    rng = random.Random(seed)
    rule = random_rule(rng, deleting=rng.random() < 0.5)
    G = planted_host(rng, rule)
    matches = find_matches(rule, G)
    assert matches
    m = matches[rng.randrange(len(matches))]
    res = weak_pushout(m.instance.morphism, m.embedding)
    assert commutes(res)
    c = random_morphism(rng, res.H)
    assert check_weak_pushout(res.r, res.i, res, compose(c, res.i_prime), compose(c, res.r_prime))
