"""Normalization by evaluation with type-directed readback.

Readback produces the eta-long beta-iota normal form; eta for functions,
surjective pairing and the terminal type all hold by construction of the
readback.  ``normalize`` then contracts eta/pairing redexes to give the short
form people expect to read.
"""
from __future__ import annotations

import contextlib
import contextvars

from .._deep import deep
from .checker import typecheck
from .errors import FuelExhausted, IllTyped, TypeMismatch
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
    UnitVal,
    Var,
    alpha_eq,
    fresh_name,
    free_vars,
)
from .types import Arrow, Context, Named, Prod, Terminal, Type

DEFAULT_FUEL = 10**6

_fuel_limit = contextvars.ContextVar("spograph_fuel", default=DEFAULT_FUEL)


@contextlib.contextmanager
def fuel_limit(limit: int):
    """Set the default per-normalization step budget within a block."""
    token = _fuel_limit.set(int(limit))
    try:
        yield
    finally:
        _fuel_limit.reset(token)


def current_fuel() -> int:
    return _fuel_limit.get()


class Fuel:
    __slots__ = ("left", "limit")

    def __init__(self, limit):
        self.limit = limit
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted(self.limit)

    @property
    def used(self):
        return self.limit - self.left


# -- semantic values --------------------------------------------------------


class VLam:
    __slots__ = ("name", "fn")

    def __init__(self, name, fn):
        self.name = name
        self.fn = fn


class VPair:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class VUnit:
    __slots__ = ()


V_UNIT = VUnit()


class VCon:
    __slots__ = ("ind", "name", "args")

    def __init__(self, ind, name, args):
        self.ind = ind
        self.name = name
        self.args = args


class VRec:
    __slots__ = ("ty", "branches", "defn")

    def __init__(self, ty, branches, defn):
        self.ty = ty
        self.branches = branches
        self.defn = defn


class VNeu:
    """Stuck computation; only ever at an inductive type (reflection is eager)."""

    __slots__ = ("neu",)

    def __init__(self, neu):
        self.neu = neu


class NVar:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class NApp:
    __slots__ = ("head", "arg", "argty")

    def __init__(self, head, arg, argty):
        self.head = head
        self.arg = arg
        self.argty = argty


class NFst:
    __slots__ = ("head",)

    def __init__(self, head):
        self.head = head


class NSnd:
    __slots__ = ("head",)

    def __init__(self, head):
        self.head = head


class NRec:
    __slots__ = ("rec", "scrut")

    def __init__(self, rec, scrut):
        self.rec = rec
        self.scrut = scrut


class _Machine:
    def __init__(self, env, fuel: Fuel):
        self.env = env
        self.fuel = fuel

    # evaluation

    def eval(self, t, rho):
        if isinstance(t, Var):
            return rho[t.name]
        if isinstance(t, Lam):
            return VLam(t.var, lambda v, t=t, rho=rho: self.eval(t.body, {**rho, t.var: v}))
        if isinstance(t, App):
            return self.apply(self.eval(t.fn, rho), self.eval(t.arg, rho))
        if isinstance(t, Pair):
            return VPair(self.eval(t.left, rho), self.eval(t.right, rho))
        if isinstance(t, Fst):
            return self.eval(t.arg, rho).left
        if isinstance(t, Snd):
            return self.eval(t.arg, rho).right
        if isinstance(t, UnitVal):
            return V_UNIT
        if isinstance(t, Con):
            return self._eval_con(t, rho)
        if isinstance(t, Rec):
            defn = self.env.lookup(t.ty.dom.name)
            return VRec(t.ty, tuple(self.eval(b, rho) for b in t.branches), defn)
        raise IllTyped(f"not a term: {t!r}")

    def _eval_con(self, t, rho):
        chain = []
        while len(t.args) == 1 and isinstance(t.args[0], Con):
            chain.append(t)
            t = t.args[0]
        v = VCon(t.ind, t.name, tuple(self.eval(a, rho) for a in t.args))
        for link in reversed(chain):
            v = VCon(link.ind, link.name, (v,))
        return v

    def apply(self, f, v):
        if isinstance(f, VLam):
            self.fuel.tick()
            return f.fn(v)
        if isinstance(f, VRec):
            if isinstance(v, VCon):
                self.fuel.tick()
                return self.iota(f, v)
            return self.reflect(f.ty.cod, NRec(f, v.neu))
        raise IllTyped("application of a non-function value")

    def iota(self, rec: VRec, con: VCon):
        defn = rec.defn
        k = defn.index(con.name)
        ctor = defn.constructors[k]
        result = rec.branches[k]
        for a in con.args:
            result = self.apply(result, a)
        for argty, a in zip(ctor.args, con.args):
            doms = defn.recursive_domains(argty)
            if doms is None:
                continue
            if not doms:
                result = self.apply(result, self.apply(rec, a))
            else:
                result = self.apply(result, self._after(rec, a, len(doms)))
        return result

    def _after(self, rec, f, arity, got=()):
        # \y1 ... yk. rec (f y1 ... yk): the "phi o f" of infinitary branches
        if len(got) == arity:
            v = f
            for y in got:
                v = self.apply(v, y)
            return self.apply(rec, v)
        return VLam("n", lambda y: self._after(rec, f, arity, got + (y,)))

    def reflect(self, ty, neu):
        if isinstance(ty, Arrow):
            return VLam(None, lambda v: self.reflect(ty.cod, NApp(neu, v, ty.dom)))
        if isinstance(ty, Prod):
            return VPair(self.reflect(ty.left, NFst(neu)), self.reflect(ty.right, NSnd(neu)))
        if isinstance(ty, Terminal):
            return V_UNIT
        return VNeu(neu)

    # readback

    def reify(self, ty, v, names):
        if isinstance(ty, Arrow):
            hint = v.name if isinstance(v, VLam) and v.name else "x"
            x = fresh_name(hint, names)
            body = self.reify(
                ty.cod, self.apply(v, self.reflect(ty.dom, NVar(x))), names | {x}
            )
            return Lam(x, ty.dom, body)
        if isinstance(ty, Prod):
            return Pair(self.reify(ty.left, v.left, names), self.reify(ty.right, v.right, names))
        if isinstance(ty, Terminal):
            return UNIT
        if isinstance(v, VNeu):
            return self.reify_neutral(v.neu, names)
        return self._reify_con(v, names)

    def _reify_con(self, v, names):
        chain = []
        while len(v.args) == 1 and isinstance(v.args[0], VCon):
            chain.append(v)
            v = v.args[0]
        ctor = self.env.lookup(v.ind).constructor(v.name)
        t = Con(v.ind, v.name, tuple(self.reify(aty, a, names) for aty, a in zip(ctor.args, v.args)))
        for link in reversed(chain):
            t = Con(link.ind, link.name, (t,))
        return t

    def reify_neutral(self, n, names):
        if isinstance(n, NVar):
            return Var(n.name)
        if isinstance(n, NApp):
            return App(self.reify_neutral(n.head, names), self.reify(n.argty, n.arg, names))
        if isinstance(n, NFst):
            return Fst(self.reify_neutral(n.head, names))
        if isinstance(n, NSnd):
            return Snd(self.reify_neutral(n.head, names))
        if isinstance(n, NRec):
            rec = n.rec
            defn = rec.defn
            branches = tuple(
                self.reify(defn.branch_type(c, rec.ty.cod), b, names)
                for c, b in zip(defn.constructors, rec.branches)
            )
            return App(Rec(rec.ty, branches), self.reify_neutral(n.scrut, names))
        raise TypeError(f"not a neutral: {n!r}")


def _run(ctx: Context, t: Term, ty: Type, fuel):
    m = _Machine(ctx.env, Fuel(current_fuel() if fuel is None else fuel))
    rho = {name: m.reflect(vty, NVar(name)) for name, vty in ctx.bindings}
    value = m.eval(t, rho)
    return m.reify(ty, value, frozenset(ctx.names()) | free_vars(t)), m.fuel


@deep
def normalize(ctx: Context, t: Term, *, fuel: int = None, eta_long: bool = False) -> Term:
    """Beta-iota normal form of a well-typed term.

    The result is eta/pairing-contracted unless ``eta_long`` is set, in which
    case the canonical eta-long form is returned.  Raises ``FuelExhausted``
    when more than ``fuel`` (default 10**6) reduction steps are needed.
    """
    ty = typecheck(ctx, t)
    long, _ = _run(ctx, t, ty, fuel)
    return long if eta_long else eta_contract(long)


@deep
def normalize_counting(ctx: Context, t: Term, *, fuel: int = None):
    """``(eta-long normal form, steps used)``."""
    ty = typecheck(ctx, t)
    long, meter = _run(ctx, t, ty, fuel)
    return long, meter.used


@deep
def term_equal(ctx: Context, s: Term, t: Term, *, fuel: int = None) -> bool:
    """Convertibility modulo alpha, beta, eta, iota and surjective pairing."""
    sty = typecheck(ctx, s)
    tty = typecheck(ctx, t)
    if sty != tty:
        raise TypeMismatch(sty, tty, t)
    return alpha_eq(_run(ctx, s, sty, fuel)[0], _run(ctx, t, tty, fuel)[0])


def eta_contract(t: Term) -> Term:
    """Contract ``\\x. f x`` to ``f`` and ``<fst p, snd p>`` to ``p`` bottom-up."""
    if isinstance(t, Lam):
        body = eta_contract(t.body)
        if (
            isinstance(body, App)
            and isinstance(body.arg, Var)
            and body.arg.name == t.var
            and t.var not in free_vars(body.fn)
        ):
            return body.fn
        return Lam(t.var, t.ty, body)
    if isinstance(t, Pair):
        left, right = eta_contract(t.left), eta_contract(t.right)
        if isinstance(left, Fst) and isinstance(right, Snd) and alpha_eq(left.arg, right.arg):
            return left.arg
        return Pair(left, right)
    if isinstance(t, App):
        return App(eta_contract(t.fn), eta_contract(t.arg))
    if isinstance(t, Fst):
        return Fst(eta_contract(t.arg))
    if isinstance(t, Snd):
        return Snd(eta_contract(t.arg))
    if isinstance(t, Con):
        chain = []
        while len(t.args) == 1 and isinstance(t.args[0], Con):
            chain.append(t)
            t = t.args[0]
        out = Con(t.ind, t.name, tuple(eta_contract(a) for a in t.args))
        for link in reversed(chain):
            out = Con(link.ind, link.name, (out,))
        return out
    if isinstance(t, Rec):
        return Rec(t.ty, tuple(eta_contract(b) for b in t.branches))
    return t


@deep
def observe(ctx: Context, t: Term, *path: int, fuel: int = None) -> Term:
    """Follow infinitary constructors: apply the stored family to each index.

    ``observe(ctx, tree, 4)`` normalizes ``tree`` to ``Lim f`` and returns the
    normal form of ``f 4``; further indices descend into nested limits.
    """
    from .terms import numeral

    current = normalize(ctx, t, fuel=fuel)
    for k in path:
        if not isinstance(current, Con):
            raise IllTyped(f"cannot observe branch {k} of non-constructor {current}")
        defn = ctx.env.lookup(current.ind)
        ctor = defn.constructor(current.name)
        family = None
        for argty, a in zip(ctor.args, current.args):
            doms = defn.recursive_domains(argty)
            if doms:
                family = a
                break
        if family is None:
            raise IllTyped(f"{current.name} has no infinitary argument to observe")
        current = normalize(ctx, App(family, numeral(k)), fuel=fuel)
    return current
