"""Small-step reduction with explicit strategies.

An independent route to normal forms, used to cross-check the evaluator:
leftmost-outermost and leftmost-innermost contraction of beta, projection
and iota redexes, followed by type-directed eta expansion.
"""
from __future__ import annotations

from .._deep import deep
from .checker import typecheck
from .errors import FuelExhausted, IllTyped
from .terms import (
    App,
    Con,
    Fst,
    Lam,
    Pair,
    Rec,
    Snd,
    Term,
    UNIT,
    Var,
    _subst,
    app,
    fresh_name,
    free_vars,
    spine,
)
from .types import Arrow, Context, Named, Prod, Terminal

STRATEGIES = ("outermost", "innermost")


def contract(env, t: Term):
    """Contract ``t`` if it is a redex at the root, else return None."""
    if isinstance(t, App):
        f = t.fn
        if isinstance(f, Lam):
            return _subst(f.body, {f.var: t.arg})
        if isinstance(f, Rec) and isinstance(t.arg, Con):
            return _iota(env, f, t.arg)
    elif isinstance(t, Fst) and isinstance(t.arg, Pair):
        return t.arg.left
    elif isinstance(t, Snd) and isinstance(t.arg, Pair):
        return t.arg.right
    return None


def _iota(env, rec: Rec, con: Con) -> Term:
    defn = env.lookup(rec.ty.dom.name)
    k = defn.index(con.name)
    ctor = defn.constructors[k]
    extra = []
    for argty, a in zip(ctor.args, con.args):
        doms = defn.recursive_domains(argty)
        if doms is None:
            continue
        if not doms:
            extra.append(App(rec, a))
            continue
        avoid = free_vars(a) | free_vars(rec)
        params = []
        for d in doms:
            y = fresh_name("n", avoid)
            avoid = avoid | {y}
            params.append((y, d))
        body = App(rec, app(a, *(Var(y) for y, _ in params)))
        for y, d in reversed(params):
            body = Lam(y, d, body)
        extra.append(body)
    return app(rec.branches[k], *con.args, *extra)


def _rebuild(t: Term, k: int, new: Term) -> Term:
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, new)
    if isinstance(t, App):
        return App(new, t.arg) if k == 0 else App(t.fn, new)
    if isinstance(t, Pair):
        return Pair(new, t.right) if k == 0 else Pair(t.left, new)
    if isinstance(t, Fst):
        return Fst(new)
    if isinstance(t, Snd):
        return Snd(new)
    if isinstance(t, Con):
        args = list(t.args)
        args[k] = new
        return Con(t.ind, t.name, tuple(args))
    if isinstance(t, Rec):
        bs = list(t.branches)
        bs[k] = new
        return Rec(t.ty, tuple(bs))
    raise ValueError(t)


def _kids(t):
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, (Fst, Snd)):
        return (t.arg,)
    if isinstance(t, Con):
        return t.args
    if isinstance(t, Rec):
        return t.branches
    return ()


def step(env, t: Term, strategy: str = "outermost"):
    """One reduction step under ``strategy``; None when ``t`` is normal."""
    if strategy == "outermost":
        r = contract(env, t)
        if r is not None:
            return r
    elif strategy != "innermost":
        raise ValueError(f"unknown strategy {strategy!r}")
    for k, child in enumerate(_kids(t)):
        r = step(env, child, strategy)
        if r is not None:
            return _rebuild(t, k, r)
    if strategy == "innermost":
        return contract(env, t)
    return None


@deep
def reduce(ctx: Context, t: Term, strategy: str = "outermost", *, fuel: int = 100_000) -> Term:
    """Reduce to beta-iota-projection normal form, one step at a time."""
    typecheck(ctx, t)
    for _ in range(fuel):
        nxt = step(ctx.env, t, strategy)
        if nxt is None:
            return t
        t = nxt
    raise FuelExhausted(fuel)


@deep
def eta_expand(ctx: Context, t: Term) -> Term:
    """Eta-long form of a beta-normal ``t`` (products and unit included)."""
    ty = typecheck(ctx, t)
    return _expand(ctx.env, ctx.as_dict(), t, ty)


def _expand(env, scope, t, ty):
    if isinstance(ty, Arrow):
        if isinstance(t, Lam):
            inner = {**scope, t.var: t.ty}
            return Lam(t.var, t.ty, _expand(env, inner, t.body, ty.cod))
        x = fresh_name("x", set(scope) | free_vars(t))
        inner = {**scope, x: ty.dom}
        return Lam(x, ty.dom, _expand(env, inner, App(t, Var(x)), ty.cod))
    if isinstance(ty, Prod):
        if isinstance(t, Pair):
            return Pair(_expand(env, scope, t.left, ty.left), _expand(env, scope, t.right, ty.right))
        return Pair(_expand(env, scope, Fst(t), ty.left), _expand(env, scope, Snd(t), ty.right))
    if isinstance(ty, Terminal):
        return UNIT
    if isinstance(t, Con):
        ctor = env.lookup(t.ind).constructor(t.name)
        return Con(t.ind, t.name, tuple(_expand(env, scope, a, aty) for a, aty in zip(t.args, ctor.args)))
    return _expand_neutral(env, scope, t)[0]


def _expand_neutral(env, scope, t):
    """Expand a neutral term; returns ``(term, type)``."""
    if isinstance(t, Var):
        return t, scope[t.name]
    if isinstance(t, (Fst, Snd)):
        head, hty = _expand_neutral(env, scope, t.arg)
        if isinstance(t, Fst):
            return Fst(head), hty.left
        return Snd(head), hty.right
    if isinstance(t, App):
        head, args = spine(t)
        if isinstance(head, Rec):
            rec = _expand_rec(env, scope, head)
            scrut, _ = _expand_neutral(env, scope, args[0])
            out, ty = App(rec, scrut), head.ty.cod
            rest = args[1:]
        else:
            out, ty = _expand_neutral(env, scope, head)
            rest = args
        for a in rest:
            out = App(out, _expand(env, scope, a, ty.dom))
            ty = ty.cod
        return out, ty
    raise IllTyped(f"expected a neutral term, got {t}")


def _expand_rec(env, scope, rec: Rec) -> Rec:
    defn = env.lookup(rec.ty.dom.name)
    branches = tuple(
        _expand(env, scope, b, defn.branch_type(c, rec.ty.cod))
        for c, b in zip(defn.constructors, rec.branches)
    )
    return Rec(rec.ty, branches)


def normalize_by_reduction(ctx: Context, t: Term, strategy: str = "outermost", *, fuel: int = 100_000) -> Term:
    """Eta-long normal form reached by small-step reduction."""
    return eta_expand(ctx, reduce(ctx, t, strategy, fuel=fuel))
