"""Typechecking and typed substitution."""
from __future__ import annotations

from typing import Mapping

from .._deep import deep
from .errors import (
    BranchArityMismatch,
    ConstructorArityMismatch,
    IllTyped,
    IllTypedBinding,
    TypeMismatch,
    UnboundVariable,
    UnknownConstructor,
)
from .terms import App, Con, Fst, Lam, Pair, Rec, Snd, Term, UnitVal, Var, _subst
from .types import Arrow, Context, Named, Prod, T, Type


@deep
def typecheck(ctx: Context, t: Term) -> Type:
    """Return the unique type of ``t`` in ``ctx``; annotation driven."""
    return _infer(ctx.env, ctx.as_dict(), t, ())


def _infer(env, scope, t, path):
    if isinstance(t, Var):
        try:
            return scope[t.name]
        except KeyError:
            raise UnboundVariable(t.name, path) from None
    if isinstance(t, Lam):
        env.check_type(t.ty)
        inner = dict(scope)
        inner[t.var] = t.ty
        return Arrow(t.ty, _infer(env, inner, t.body, path + ("body",)))
    if isinstance(t, App):
        fty = _infer(env, scope, t.fn, path + ("fn",))
        if not isinstance(fty, Arrow):
            raise TypeMismatch("a function type", fty, t.fn, path + ("fn",))
        aty = _infer(env, scope, t.arg, path + ("arg",))
        if aty != fty.dom:
            raise TypeMismatch(fty.dom, aty, t.arg, path + ("arg",))
        return fty.cod
    if isinstance(t, Pair):
        return Prod(
            _infer(env, scope, t.left, path + ("left",)),
            _infer(env, scope, t.right, path + ("right",)),
        )
    if isinstance(t, (Fst, Snd)):
        pty = _infer(env, scope, t.arg, path + ("arg",))
        if not isinstance(pty, Prod):
            raise TypeMismatch("a product type", pty, t.arg, path + ("arg",))
        return pty.left if isinstance(t, Fst) else pty.right
    if isinstance(t, UnitVal):
        return T
    if isinstance(t, Con):
        return _infer_con(env, scope, t, path)
    if isinstance(t, Rec):
        return _infer_rec(env, scope, t, path)
    raise IllTyped(f"not a term: {t!r}")


def _infer_con(env, scope, t, path):
    # numerals nest deeply; walk unary chains without recursion
    chain = []
    while True:
        defn = env.lookup(t.ind)
        try:
            ctor = defn.constructor(t.name)
        except UnknownConstructor:
            raise UnknownConstructor(t.name, t.ind) from None
        if ctor.arity != len(t.args):
            raise ConstructorArityMismatch(t.name, ctor.arity, len(t.args), path)
        if (
            len(t.args) == 1
            and isinstance(t.args[0], Con)
            and ctor.args[0] == defn.type
        ):
            chain.append(t)
            t = t.args[0]
            continue
        break
    if chain:
        path = path + (f"{chain[0].name}^{len(chain)}",)
    for k, (a, expected) in enumerate(zip(t.args, ctor.args)):
        got = _infer(env, scope, a, path + (f"{t.name}[{k}]",))
        if got != expected:
            raise TypeMismatch(expected, got, a, path + (f"{t.name}[{k}]",))
    result = defn.type
    # each chain link expects its own type as argument
    for link in reversed(chain):
        ldefn = env.lookup(link.ind)
        if result != ldefn.type:
            raise TypeMismatch(ldefn.type, result, link.args[0], path)
        result = ldefn.type
    return result


def _infer_rec(env, scope, t, path):
    ty = t.ty
    env.check_type(ty)
    if not isinstance(ty, Arrow) or not isinstance(ty.dom, Named):
        raise TypeMismatch("an eliminator type I -> A", ty, t, path)
    defn = env.lookup(ty.dom.name)
    if len(t.branches) != len(defn.constructors):
        raise BranchArityMismatch(defn.name, len(defn.constructors), len(t.branches), path)
    for k, (ctor, b) in enumerate(zip(defn.constructors, t.branches)):
        expected = defn.branch_type(ctor, ty.cod)
        got = _infer(env, scope, b, path + (f"branch[{k}]",))
        if got != expected:
            raise TypeMismatch(expected, got, b, path + (f"branch[{k}]",))
    return ty


@deep
def substitute(t: Term, bindings: Mapping[str, Term], ctx: Context = None) -> Term:
    """Capture-avoiding simultaneous substitution.

    With ``ctx`` given, each binding is typechecked against the type the
    context declares for its variable.
    """
    bindings = dict(bindings)
    if ctx is not None:
        for name, value in bindings.items():
            declared = ctx.lookup(name)
            if declared is None:
                continue
            try:
                got = _infer(ctx.env, ctx.without(bindings).as_dict(), value, ())
            except IllTyped as exc:
                raise IllTypedBinding(name, str(exc)) from exc
            if got != declared:
                raise IllTypedBinding(name, f"expected {declared}, got {got}")
    return _subst(t, bindings)
