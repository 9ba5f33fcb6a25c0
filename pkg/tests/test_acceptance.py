"""Acceptance criteria; each test prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or under pytest.
"""
import math
import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from generators import (  # noqa: E402
    NAT,
    brute_force_matches,
    planted_host,
    random_graph,
    random_host,
    random_morphism,
    random_rule,
    random_total_injective,
)
from spograph import (  # noqa: E402
    apply_rule,
    canonical_retraction,
    check_weak_pushout,
    commutes,
    compose,
    find_matches,
    identity,
    make_morphism,
    morphisms_equal,
    run,
    validate_morphism,
)
from spograph.frontend import fixture_dir, load_file  # noqa: E402
from spograph.graph_model import build_graph  # noqa: E402
from spograph.lambda_core import App, Con, alpha_eq, numeral, observe, term_equal  # noqa: E402

FX = fixture_dir()
FACT = load_file(os.path.join(FX, "factorial.agr"))
OMEGA = load_file(os.path.join(FX, "omegatree.agr"))
DANGLING = load_file(os.path.join(FX, "dangling.agr"))
MERGE = load_file(os.path.join(FX, "merge.agr"))

CHALLENGES = 20
REPORTED = []  # lines repeated in the pytest terminal summary


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    REPORTED.append(line)
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return ok


def path_of(k):
    t = Con("Twot", "Leaf")
    for _ in range(k):
        t = Con("Twot", "SuccW", (t,))
    return t


def final_value(trace):
    G = trace.final
    (v,) = G.vertices
    return G.att(v).term


# -- the runs every later criterion refers to

def lambda_runs():
    return {n: run(FACT.grammar("LambdaFact"), FACT.graph(f"N{n}")) for n in (3, 4, 5, 6)}


def sigma_runs():
    return {n: run(FACT.grammar("SigmaFact"), FACT.graph(f"N{n}chain")) for n in range(3, 9)}


def check_1():
    problems = []
    for n in (3, 4, 5, 6):
        t0 = time.perf_counter()
        trace = run(FACT.grammar("LambdaFact"), FACT.graph(f"N{n}"))
        dt = time.perf_counter() - t0
        val = final_value(trace)
        if trace.step_count != 1:
            problems.append(f"n={n}: {trace.step_count} applications")
        if not term_equal(trace.final.ctx, val, numeral(math.factorial(n))):
            problems.append(f"n={n}: wrong value")
        if dt >= 5:
            problems.append(f"n={n}: {dt:.2f}s")
    return problems, "lambda grammar, n=3..6: 1 application each, values 6/24/120/720, each < 5 s"


def check_2():
    problems = []
    for n in range(3, 9):
        trace = run(FACT.grammar("SigmaFact"), FACT.graph(f"N{n}chain"))
        if trace.step_count != 2 * n - 3:
            problems.append(f"n={n}: {trace.step_count} != {2 * n - 3}")
        if not term_equal(trace.final.ctx, final_value(trace), numeral(math.factorial(n))):
            problems.append(f"n={n}: wrong value")
    return problems, "sigma grammar, n=3..8: exactly 2n-3 applications, value n!"


def check_3():
    ctx = OMEGA.ctx
    tree, phi, phi2, nested = (OMEGA.term(k).term for k in ("tree", "phi", "phi2", "nested"))
    problems = []
    for n in range(6):
        if not term_equal(ctx, observe(ctx, tree, n), path_of(n)):
            problems.append(f"tree branch {n} is not of length {n}")
        if not term_equal(ctx, observe(ctx, App(phi, tree), n), path_of(2 * n)):
            problems.append(f"phi branch {n} is not of length {2 * n}")
    # phi2: at level one, branch n is phi2 of the original branch 2n; at
    # level two the selection repeats.
    image = App(phi2, nested)
    for n in range(4):
        if not term_equal(ctx, observe(ctx, image, n), App(phi2, observe(ctx, nested, 2 * n))):
            problems.append(f"phi2 level 1 branch {n}")
        for m in range(4):
            if not term_equal(ctx, observe(ctx, image, n, m), path_of(2 * n + 2 * m)):
                problems.append(f"phi2 level 2 branch ({n}, {m})")
    trace = run(OMEGA.grammar("EvenBranches"), OMEGA.graph("Tree"))
    out = trace.final.att(1).term
    for n in range(6):
        if not term_equal(ctx, observe(ctx, out, n), path_of(2 * n)):
            problems.append(f"rewritten graph branch {n}")
    return problems, "phi branch n has length 2n (n=0..5); phi2 selects at both levels of the nested fixture"


def check_4(count=200):
    failures = 0
    for seed in range(count):
        rng = random.Random(seed)
        A = random_graph(rng)
        f = random_morphism(rng, A)
        g = random_morphism(rng, f.target)
        h = random_morphism(rng, g.target)
        assert len(A) <= 4 and len(f.target) <= 4 and len(g.target) <= 4 and len(h.target) <= 4
        ok = (
            not any(validate_morphism(m) for m in (f, g, h))
            and morphisms_equal(compose(h, compose(g, f)), compose(compose(h, g), f))
            and morphisms_equal(compose(f, identity(A)), f)
            and morphisms_equal(compose(identity(f.target), f), f)
        )
        failures += not ok
    return [f"{failures} failures"] if failures else [], f"{count} random triples: associativity and both identity laws"


def check_5(count=100):
    failures = 0
    for seed in range(count):
        rng = random.Random(10_000 + seed)
        G = random_graph(rng)
        f = random_total_injective(rng, G)
        if not morphisms_equal(compose(canonical_retraction(f), f), identity(G)):
            failures += 1
    G = build_graph([(1, numeral(1), NAT)], [], FACT.ctx)
    H = build_graph([(1, numeral(1), NAT), (2, numeral(9), NAT)], [], FACT.ctx)
    f = make_morphism(G, H, {1: 1})
    converse_holds = morphisms_equal(compose(f, canonical_retraction(f)), identity(H))
    problems = [f"{failures} failures"] if failures else []
    if converse_holds:
        problems.append("f o retraction = Id on a non-surjective witness")
    return problems, f"{count} random total injective f: retraction o f = Id; f o retraction != Id on a non-surjective witness"


def applications():
    """Every rule application from criteria 1-3 plus the dangling and merge fixtures."""
    out = []
    for n, trace in lambda_runs().items():
        out += [(f"lambda n={n}", "factorial", s.result) for s in trace.steps]
    for n, trace in sigma_runs().items():
        out += [(f"sigma n={n} step {s.index}", "factorial", s.result) for s in trace.steps]
    trace = run(OMEGA.grammar("EvenBranches"), OMEGA.graph("Tree"))
    out += [("omega", "omegatree", s.result) for s in trace.steps]
    out.append(("dangling", "dangling", apply_rule(DANGLING.rule("dropNat"), DANGLING.graph("Host"))[1]))
    out.append(("merge", "merge", apply_rule(MERGE.rule("merge"), MERGE.graph("Host"))[1]))
    return out


def check_6():
    problems = []
    per_fixture = {}
    apps = applications()
    for label, fixture, res in apps:
        if not commutes(res):
            problems.append(f"{label}: square does not commute")
    for k, (label, fixture, res) in enumerate(apps):
        done = per_fixture.get(fixture, 0)
        rounds = CHALLENGES if fixture != "factorial" or label.startswith(("lambda n=3", "sigma n=4")) else 2
        for j in range(rounds):
            rng = random.Random(k * 1000 + j)
            c = random_morphism(rng, res.H)
            h, g = compose(c, res.i_prime), compose(c, res.r_prime)
            if not check_weak_pushout(res.r, res.i, res, h, g):
                problems.append(f"{label}: challenge {j} does not factor")
        if not check_weak_pushout(res.r, res.i, res, res.i_prime, res.r_prime):
            problems.append(f"{label}: trivial challenge")
        per_fixture[fixture] = done + rounds + 1
    short = [f for f, n in per_fixture.items() if n < CHALLENGES]
    if short:
        problems.append(f"fewer than {CHALLENGES} challenges for {short}")
    counts = ", ".join(f"{f} {n}" for f, n in sorted(per_fixture.items()))
    return problems, f"{len(apps)} applications commute; challenges per fixture: {counts}"


def check_7():
    m, res = apply_rule(DANGLING.rule("dropNat"), DANGLING.graph("Host"))
    H = res.H
    problems = []
    if res.deleted != (1, 3):
        problems.append(f"deleted {res.deleted}")
    if sorted(H.vertices) != [1] or H.edges or H.att(1).term != Con("Bool", "True"):
        problems.append(f"H = {H}")
    rebuilt = build_graph(
        [(v, *H.vertices[v]) for v in H.vertices],
        [(e, H.src(e), H.tgt(e), *H.edges[e]) for e in H.edges],
        H.ctx,
    )
    if len(rebuilt) != len(H) or validate_morphism(res.r_prime):
        problems.append("H or r' fails validation")
    return problems, "matched Nat vertex and its incident edge deleted; H is the Bool vertex alone and validates"


def check_8(count=100):
    failures = nonempty = 0
    for seed in range(count):
        rng = random.Random(20_000 + seed)
        rule = random_rule(rng, deleting=seed % 3 == 0)
        G = planted_host(rng, rule) if seed % 2 else random_host(rng)
        assert len(G) <= 5
        got = [(m.targets, m.sigma) for m in find_matches(rule, G)]
        expected = brute_force_matches(rule, G)
        same = len(got) == len(expected) and all(
            a[0] == b[0] and a[1].keys() == b[1].keys() and all(alpha_eq(a[1][n], b[1][n]) for n in a[1])
            for a, b in zip(got, expected)
        )
        failures += not same
        nonempty += bool(expected)
    problems = [f"{failures} mismatches"] if failures else []
    return problems, f"{count} random (rule, graph) pairs ({nonempty} with matches) agree with brute force in set and order"


def _run(number, fn):
    problems, detail = fn()
    if problems:
        detail += " | " + "; ".join(problems[:5])
    report(number, not problems, detail)
    return problems


def test_criterion_1_lambda_factorial():
    assert not _run(1, check_1)


def test_criterion_2_sigma_factorial():
    assert not _run(2, check_2)


def test_criterion_3_omega_trees():
    assert not _run(3, check_3)


def test_criterion_4_category_laws():
    assert not _run(4, check_4)


def test_criterion_5_retraction():
    assert not _run(5, check_5)


def test_criterion_6_weak_pushout():
    assert not _run(6, check_6)


def test_criterion_7_dangling():
    assert not _run(7, check_7)


def test_criterion_8_match_oracle():
    assert not _run(8, check_8)


if __name__ == "__main__":
    checks = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8]
    failed = [k for k, fn in enumerate(checks, start=1) if _run(k, fn)]
    sys.exit(1 if failed else 0)
