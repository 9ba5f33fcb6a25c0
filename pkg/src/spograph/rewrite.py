"""Rule schemes, matching and single-pushout application by weak pushout.

A rule is one partial morphism ``r: L -> R`` whose left attributes may be
first-order patterns over declared variables.  Application instantiates the
rule, embeds the instance ``L`` into a host graph ``G`` with a total
injective ``i``, and builds ``H`` from the coproduct ``G + R`` quotiented by
the equivalence generated by ``i(x) ~ r(x)``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ._deep import deep
from .graph_model import Attribute, Graph, build_graph
from .lambda_core import (
    Context,
    IllTyped,
    Lam,
    PatternError,
    Term,
    Var,
    alpha_eq,
    app,
    check_pattern,
    free_vars,
    fresh_name,
    match_pattern,
    normalize,
    substitute,
)
from .morphism import (
    Morphism,
    _same_graph,
    canonical_retraction,
    compose,
    constant_function,
    is_injective,
    make_morphism,
    morphisms_equal,
    validate_morphism,
)


class RewriteError(Exception):
    pass


class MalformedRule(RewriteError):
    def __init__(self, rule_name, problems):
        self.problems = list(problems)
        text = "; ".join(str(p) for p in self.problems)
        super().__init__(f"rule {rule_name}: {text}")


class UnboundPatternVariable(RewriteError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"no binding for pattern variable(s) {', '.join(self.names)}")


class NotTotalInjectiveEmbedding(RewriteError):
    pass


class SourceMismatch(RewriteError):
    pass


class NonCommutingChallenge(RewriteError):
    pass


@dataclass(frozen=True, eq=False)
class RuleScheme:
    """Rule ``r: L -> R``; ``lhs.ctx`` declares the pattern variables."""

    name: str
    morphism: Morphism

    @property
    def lhs(self) -> Graph:
        return self.morphism.source

    @property
    def rhs(self) -> Graph:
        return self.morphism.target

    @property
    def variables(self) -> tuple:
        return self.lhs.ctx.bindings

    @property
    def base_ctx(self) -> Context:
        return self.lhs.ctx.without(n for n, _ in self.variables)

    def __repr__(self):
        return f"RuleScheme({self.name!r}, {self.morphism!r})"


def make_rule(name, lhs: Graph, rhs: Graph, str_map, adr=None, cmp=None, *, check=True) -> RuleScheme:
    """Rule from both sides and a structural map; see ``make_morphism`` for
    the ``adr``/``cmp`` defaults."""
    rule = RuleScheme(name, make_morphism(lhs, rhs, str_map, adr, cmp))
    if check:
        problems = validate_rule(rule)
        if problems:
            raise MalformedRule(name, problems)
    return rule


@deep
def validate_rule(rule: RuleScheme) -> list:
    """Problems with a rule scheme, checked with variables kept symbolic."""
    problems = []
    L, R = rule.lhs, rule.rhs
    lvars = set()
    for x in L.elements():
        try:
            lvars.update(check_pattern(L.att(x).term, L.ctx))
        except PatternError as exc:
            problems.append(f"left attribute of {x}: {exc}")
    declared = {n for n, _ in rule.variables}
    rvars = set()
    for x in R.elements():
        rvars |= free_vars(R.att(x).term) & declared
    for v in rule.morphism.cmp.values():
        rvars |= free_vars(v) & declared
    if rvars - lvars:
        problems.append(f"right side uses variables absent on the left: {sorted(rvars - lvars)}")
    problems.extend(validate_morphism(rule.morphism))
    return problems


@dataclass(frozen=True, eq=False)
class RuleInstance:
    rule: RuleScheme
    sigma: Mapping[str, Term]
    morphism: Morphism

    @property
    def lhs(self) -> Graph:
        return self.morphism.source

    @property
    def rhs(self) -> Graph:
        return self.morphism.target


@deep
def instantiate(rule: RuleScheme, sigma: Mapping[str, Term], *, check: bool = True) -> RuleInstance:
    """Substitute closed terms for the pattern variables and normalize."""
    sigma = dict(sigma)
    L, R = rule.lhs, rule.rhs
    needed = set()
    for x in L.elements():
        needed |= free_vars(L.att(x).term)
    declared = {n for n, _ in rule.variables}
    missing = (needed & declared) - set(sigma)
    if missing:
        raise UnboundPatternVariable(missing)
    # type-checks the bindings (IllTypedBinding)
    substitute(Var("_"), sigma, L.ctx)
    base = rule.base_ctx

    def side(g: Graph) -> Graph:
        vs = [(v, normalize(base, substitute(a.term, sigma)), a.type) for v, a in sorted(g.vertices.items())]
        es = [
            (e, g.src(e), g.tgt(e), normalize(base, substitute(a.term, sigma)), a.type)
            for e, a in sorted(g.edges.items())
        ]
        return build_graph(vs, es, base)

    Ls, Rs = side(L), side(R)
    r = rule.morphism
    cmp = {v: substitute(t, sigma) for v, t in r.cmp.items()}
    morphism = Morphism(Ls, Rs, r.str_map, r.adr, cmp)
    if check:
        problems = validate_morphism(morphism)
        if problems:
            raise MalformedRule(rule.name, problems)
    return RuleInstance(rule, sigma, morphism)


def embedding(L: Graph, G: Graph, assignment: Mapping[int, int]) -> Morphism:
    """Total injective morphism ``L -> G`` sending ``x`` to ``assignment[x]``."""
    images = set(assignment.values())
    cmp = {}
    for y in G.elements():
        if y in images:
            cmp[y] = Lam("x", G.att(y).type, Var("x"))
        else:
            cmp[y] = G.att(y).term
    return Morphism(L, G, assignment, frozenset(assignment.items()), cmp)


class Match:
    """A substitution plus an injective embedding of the instantiated left side."""

    def __init__(self, rule: RuleScheme, host: Graph, sigma: Mapping[str, Term], assignment):
        self.rule = rule
        self.host = host
        self.sigma = dict(sigma)
        self.assignment = dict(assignment)

    @property
    def targets(self) -> tuple:
        """Host ids in the order of the left side's elements."""
        return tuple(self.assignment[x] for x in self.rule.lhs.elements())

    @functools.cached_property
    def instance(self) -> RuleInstance:
        return instantiate(self.rule, self.sigma)

    @functools.cached_property
    def embedding(self) -> Morphism:
        return embedding(self.instance.lhs, self.host, self.assignment)

    def __repr__(self):
        sig = ", ".join(f"{k}={v}" for k, v in sorted(self.sigma.items()))
        return f"Match({self.rule.name}, sigma={{{sig}}}, targets={self.targets})"


@deep
def find_matches(rule: RuleScheme, G: Graph) -> list:
    """Every total injective embedding of ``rule.lhs`` into ``G`` whose
    attributes match, ordered lexicographically by targets."""
    L = rule.lhs
    order = L.elements()
    pats = {x: L.att(x).term for x in order}
    for x in order:
        check_pattern(pats[x], L.ctx)
    normal = {}

    def value(y):
        if y not in normal:
            normal[y] = normalize(G.ctx, G.att(y).term)
        return normal[y]

    candidates = {}
    for x in order:
        pool = G.vertices if L.is_vertex(x) else G.edges
        ty = L.att(x).type
        candidates[x] = [y for y in sorted(pool) if pool[y].type == ty]
    incident = {v: [] for v in L.vertices}
    for e in L.edges:
        incident[L.src(e)].append(e)
        if L.tgt(e) != L.src(e):
            incident[L.tgt(e)].append(e)

    results = []
    assign, used = {}, set()

    def consistent(x, y):
        if L.is_edge(x):
            for end, gend in ((L.src(x), G.src(y)), (L.tgt(x), G.tgt(y))):
                if end in assign and assign[end] != gend:
                    return False
        else:
            for e in incident[x]:
                if e in assign:
                    ge = assign[e]
                    if L.src(e) == x and G.src(ge) != y:
                        return False
                    if L.tgt(e) == x and G.tgt(ge) != y:
                        return False
        return True

    def search(k, sigma):
        if k == len(order):
            results.append(Match(rule, G, sigma, assign))
            return
        x = order[k]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            found = match_pattern(pats[x], value(y), G.ctx)
            if found is None:
                continue
            merged = dict(sigma)
            ok = True
            for name, term in found.items():
                if name in merged and not alpha_eq(merged[name], term):
                    ok = False
                    break
                merged[name] = term
            if not ok:
                continue
            assign[x] = y
            used.add(y)
            search(k + 1, merged)
            del assign[x]
            used.discard(y)

    search(0, {})
    return results


@dataclass(frozen=True, eq=False)
class PushoutResult:
    """``H`` with ``r': G -> H`` and ``i': R -> H``.

    ``class_map`` sends each ``H`` element to its equivalence class, given as
    tagged members ``("G", id)`` / ``("R", id)``; ``deleted`` lists the host
    elements that have no image (unmatched-by-``r`` and dangling).
    """

    H: Graph
    r_prime: Morphism
    i_prime: Morphism
    class_map: Mapping[int, frozenset]
    deleted: tuple
    r: Morphism
    i: Morphism
    stages: Mapping[str, object] = field(default_factory=dict)

    def r_image(self, h_element) -> Optional[int]:
        for tag, x in self.class_map[h_element]:
            if tag == "R":
                return x
        return None


class _Classes:
    """Union-find over coproduct ids with the smallest member as key."""

    def __init__(self, elements):
        self.parent = {x: x for x in elements}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return {k: sorted(v) for k, v in out.items()}


def _inclusion(src: Graph, coprod: Graph, shift: int) -> Morphism:
    mapped = {x: x + shift for x in src.elements()}
    image = set(mapped.values())
    cmp = {}
    for y in coprod.elements():
        attr = coprod.att(y)
        cmp[y] = Lam("x", attr.type, Var("x")) if y in image else attr.term
    return Morphism(src, coprod, mapped, frozenset(mapped.items()), cmp)


@deep
def weak_pushout(r: Morphism, i: Morphism) -> PushoutResult:
    """Apply the (instantiated) rule ``r: L -> R`` at the embedding ``i: L -> G``."""
    if not _same_graph(r.source, i.source):
        raise SourceMismatch("rule and embedding have different left sides")
    if not i.is_total() or not is_injective(i):
        raise NotTotalInjectiveEmbedding("the embedding must be total and injective")
    L, G, R = r.source, i.target, r.target
    ctx = G.ctx.merge(R.ctx)

    # coproduct G + R: host ids kept, rule ids shifted past them
    offset = G.max_id()
    rid = {z: z + offset for z in R.elements()}
    coprod = build_graph(
        [(v, *G.vertices[v]) for v in sorted(G.vertices)]
        + [(rid[v], *R.vertices[v]) for v in sorted(R.vertices)],
        [(e, G.src(e), G.tgt(e), *G.edges[e]) for e in sorted(G.edges)]
        + [(rid[e], rid[R.src(e)], rid[R.tgt(e)], *R.edges[e]) for e in sorted(R.edges)],
        ctx,
        check_types=False,
    )
    j1 = _inclusion(G, coprod, 0)
    j2 = _inclusion(R, coprod, offset)
    from_rule = set(rid.values())

    # a ~1 b iff a = j'(i(x)) and b = j''(r(x)); ~ is its equivalence closure
    classes = _Classes(coprod.elements())
    for x in L.elements():
        if x in r.str_map:
            classes.union(i.str_map[x], rid[r.str_map[x]])
    groups = classes.groups()

    def ordered(keys):
        vs = sorted(k for k in keys if coprod.is_vertex(k))
        es = sorted(k for k in keys if coprod.is_edge(k))
        return vs + es

    def quotient(keys):
        ident = {k: n for n, k in enumerate(ordered(keys), start=1)}
        vs, es = [], []
        for k in ordered(keys):
            members = groups[k]
            rep = next((m for m in members if m in from_rule), k)
            attr = coprod.att(rep)
            if coprod.is_vertex(k):
                vs.append((ident[k], *attr))
            else:
                src = ident[classes.find(coprod.src(k))]
                tgt = ident[classes.find(coprod.tgt(k))]
                es.append((ident[k], src, tgt, *attr))
        return ident, build_graph(vs, es, ctx, check_types=False)

    qid, Q = quotient(groups)
    cls = {m: qid[classes.find(m)] for m in coprod.elements()}

    # f'': every element to its class; dependencies only from the rule part
    f2_cmp = {}
    for k, q in qid.items():
        attr = Q.att(q)
        has_r = any(m in from_rule for m in groups[k])
        f2_cmp[q] = Lam("x", attr.type, Var("x")) if has_r else attr.term
    f2 = Morphism(coprod, Q, cls, frozenset((z, cls[z]) for z in from_rule), f2_cmp)

    # f' on img(j' o i) is f'' o j'' o r o i-bar o j'-bar; identity-like on G - i(L)
    matched = set(i.str_map.values())
    composite = compose(f2, compose(j2, compose(r, compose(canonical_retraction(i), canonical_retraction(j1)))))
    rest = [y for y in G.elements() if y not in matched]
    f1_str = dict(composite.str_map)
    f1_adr = set(composite.adr)
    f1_cmp = dict(composite.cmp)
    for y in rest:
        f1_str[y] = cls[y]
        f1_adr.add((y, cls[y]))
        f1_cmp[cls[y]] = Lam("x", G.att(y).type, Var("x"))
    f1 = Morphism(coprod, Q, f1_str, f1_adr, f1_cmp)

    # H keeps the spans, the new rule elements and the untouched host elements
    # that are not dangling edges
    dom_r = set(r.str_map)
    dropped = {i.str_map[x] for x in L.elements() if x not in dom_r}
    gone = {classes.find(y) for y in dropped}
    dangling = set()
    for e in sorted(G.edges):
        if e in matched:
            continue
        if classes.find(G.src(e)) in gone or classes.find(G.tgt(e)) in gone:
            dangling.add(e)
            gone.add(classes.find(e))
    survivors = [k for k in groups if k not in gone]
    hid, H = quotient(survivors)
    p_str = {qid[k]: hid[k] for k in survivors}
    p = Morphism(
        Q,
        H,
        p_str,
        frozenset(p_str.items()),
        {h: Lam("x", H.att(h).type, Var("x")) for h in H.elements()},
    )
    r_prime = compose(p, compose(f1, j1))
    i_prime = compose(p, compose(f2, j2))

    back = {z + offset: z for z in R.elements()}
    class_map = {}
    for k in survivors:
        class_map[hid[k]] = frozenset(
            ("R", back[m]) if m in from_rule else ("G", m) for m in groups[k]
        )
    deleted = tuple(sorted(dropped | dangling))
    stages = {"coproduct": coprod, "j1": j1, "j2": j2, "quotient": Q, "f1": f1, "f2": f2, "p": p}
    return PushoutResult(H, r_prime, i_prime, class_map, deleted, r, i, stages)


@deep
def commutes(result: PushoutResult) -> bool:
    """The square ``i' o r = r' o i``."""
    return morphisms_equal(compose(result.i_prime, result.r), compose(result.r_prime, result.i))


def _abstract(source: Graph, args, fn: Term, used, ctx_names) -> Term:
    """``\\x_a ... . fn x_u1 ...`` binding one variable per element of ``args``."""
    avoid = set(ctx_names) | free_vars(fn)
    names = {}
    for a in args:
        names[a] = fresh_name("x", avoid)
        avoid.add(names[a])
    body = app(fn, *(Var(names[u]) for u in used))
    for a in reversed(args):
        body = Lam(names[a], source.att(a).type, body)
    return body


@deep
def mediating_morphism(result: PushoutResult, h: Morphism, g: Morphism) -> Morphism:
    """``c = h o i'-bar`` extended on the untouched host part in accord with ``g``."""
    H = result.H
    base = compose(h, canonical_retraction(result.i_prime))
    host_part = {}
    for e, members in result.class_map.items():
        if not any(tag == "R" for tag, _ in members):
            ((_, y),) = members
            host_part[e] = y
    elem_of = {y: e for e, y in host_part.items()}
    str_map = dict(base.str_map)
    adr = set(base.adr)
    for e, y in host_part.items():
        if y in g.str_map:
            str_map[e] = g.str_map[y]
        for (u, w) in g.adr:
            if u == y:
                adr.add((e, w))
    pre = {}
    for e, w in adr:
        pre.setdefault(w, []).append(e)
    target = h.target
    ctx_names = H.ctx.names() | target.ctx.names()
    cmp = {}
    for w in target.elements():
        args = sorted(pre.get(w, ()))
        if base.preimage(w):
            fn, used = base.cmp[w], list(base.preimage(w))
        elif g.preimage(w) and all(y in elem_of for y in g.preimage(w)):
            fn, used = g.cmp[w], [elem_of[y] for y in g.preimage(w)]
        else:
            fn, used = constant_function([], target.att(w).term), []
        cmp[w] = _abstract(H, args, fn, used, ctx_names)
    return Morphism(H, target, str_map, adr, cmp)


@deep
def check_weak_pushout(r: Morphism, i: Morphism, result: PushoutResult, h: Morphism, g: Morphism) -> bool:
    """Factor the competing cocone ``(h, g)`` through ``(i', r')``.

    Returns whether the constructed ``c`` satisfies ``c o i' = h`` and
    ``c o r' = g``; a unique such ``c`` is not required.
    """
    if not morphisms_equal(compose(h, r), compose(g, i)):
        raise NonCommutingChallenge("h o r differs from g o i")
    c = mediating_morphism(result, h, g)
    if validate_morphism(c):
        return False
    return morphisms_equal(compose(c, result.i_prime), h) and morphisms_equal(
        compose(c, result.r_prime), g
    )


@deep
def apply_rule(rule: RuleScheme, G: Graph, match: int = 0):
    """Find matches and rewrite at the ``match``-th one; ``(Match, PushoutResult)``."""
    matches = find_matches(rule, G)
    if not matches:
        return None
    m = matches[match]
    return m, weak_pushout(m.instance.morphism, m.embedding)
