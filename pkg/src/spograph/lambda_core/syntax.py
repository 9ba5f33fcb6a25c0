"""Pretty-printing in the concrete term/type syntax.

Abstraction ``\\x:Nat. body``, left-associative juxtaposition, ``<a, b>``,
``fst t`` / ``snd t``, ``unit``, ``Rec[Nat -> Nat](b0)(b1)``.  Nat numerals
are re-sugared to decimal literals.
"""
from __future__ import annotations

from .terms import App, Con, Fst, Lam, Pair, Rec, Snd, Term, UnitVal, Var, as_numeral
from .types import Arrow, Named, Prod, Terminal, Type

_TOP, _APP, _ATOM = 0, 1, 2


def show_type(ty: Type, prec: int = 0) -> str:
    # prec 0: anywhere, 1: arrow domain / product operand, 2: right product operand
    if isinstance(ty, Arrow):
        s = f"{show_type(ty.dom, 1)} -> {show_type(ty.cod, 0)}"
        return f"({s})" if prec >= 1 else s
    if isinstance(ty, Prod):
        s = f"{show_type(ty.left, 1)} * {show_type(ty.right, 2)}"
        return f"({s})" if prec >= 2 else s
    if isinstance(ty, Terminal):
        return "T"
    if isinstance(ty, Named):
        return ty.name
    raise TypeError(f"not a type: {ty!r}")


def show_term(t: Term, prec: int = _TOP) -> str:
    n = as_numeral(t)
    if n is not None:
        return str(n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, UnitVal):
        return "unit"
    if isinstance(t, Pair):
        return f"<{show_term(t.left)}, {show_term(t.right)}>"
    if isinstance(t, Rec):
        branches = "".join(f"({show_term(b)})" for b in t.branches)
        return f"Rec[{show_type(t.ty)}]{branches}"
    if isinstance(t, Lam):
        s = f"\\{t.var}:{show_type(t.ty)}. {show_term(t.body)}"
        return f"({s})" if prec > _TOP else s
    if isinstance(t, Con):
        if not t.args:
            return t.name
        s = " ".join([t.name] + [show_term(a, _ATOM) for a in t.args])
        return f"({s})" if prec >= _ATOM else s
    if isinstance(t, (Fst, Snd)):
        kw = "fst" if isinstance(t, Fst) else "snd"
        s = f"{kw} {show_term(t.arg, _ATOM)}"
        return f"({s})" if prec >= _ATOM else s
    if isinstance(t, App):
        s = f"{show_term(t.fn, _APP)} {show_term(t.arg, _ATOM)}"
        return f"({s})" if prec >= _ATOM else s
    raise TypeError(f"not a term: {t!r}")
