"""First-order linear pattern matching against closed normal forms."""
from __future__ import annotations

from typing import Optional

from .._deep import deep
from .errors import HigherOrderPattern, NonLinearPattern
from .nbe import normalize
from .terms import Con, Pair, Term, UnitVal, Var, alpha_eq, free_vars
from .types import Arrow, Context


def pattern_variables(pattern: Term) -> list:
    """Pattern variables in left-to-right order; raises on a bad pattern."""
    seen = []
    _collect(pattern, seen)
    return seen


def _collect(p, seen):
    if isinstance(p, Var):
        if p.name in seen:
            raise NonLinearPattern(p.name)
        seen.append(p.name)
    elif isinstance(p, Con):
        for a in p.args:
            _collect(a, seen)
    elif isinstance(p, Pair):
        _collect(p.left, seen)
        _collect(p.right, seen)
    elif free_vars(p):
        names = ", ".join(sorted(free_vars(p)))
        raise HigherOrderPattern(
            f"pattern variable(s) {names} occur outside constructor/pair arguments in {p}"
        )


def check_pattern(pattern: Term, ctx: Context = None) -> list:
    """Validate a pattern; with ``ctx``, function-typed variables are rejected."""
    names = pattern_variables(pattern)
    if ctx is not None:
        for n in names:
            ty = ctx.lookup(n)
            if isinstance(ty, Arrow):
                raise HigherOrderPattern(f"pattern variable {n} has function type {ty}")
    return names


@deep
def match_pattern(pattern: Term, value: Term, ctx: Context = None) -> Optional[dict]:
    """Bindings ``s`` with ``pattern[s]`` convertible to ``value``, or None.

    ``value`` is a closed normal form.  Closed sub-patterns are compared after
    normalization in ``ctx`` when one is supplied, syntactically otherwise.
    """
    pattern_variables(pattern)
    bindings = {}
    if _match(pattern, value, bindings, ctx):
        return bindings
    return None


def _match(p, v, out, ctx):
    while True:
        if isinstance(p, Var):
            out[p.name] = v
            return True
        if not free_vars(p):
            if ctx is not None:
                p = normalize(ctx, p)
            return alpha_eq(p, v)
        if isinstance(p, Con):
            if not isinstance(v, Con) or v.name != p.name or len(v.args) != len(p.args):
                return False
            if not p.args:
                return True
            for pa, va in zip(p.args[:-1], v.args[:-1]):
                if not _match(pa, va, out, ctx):
                    return False
            p, v = p.args[-1], v.args[-1]
            continue
        if isinstance(p, Pair):
            if not isinstance(v, Pair):
                return False
            if not _match(p.left, v.left, out, ctx):
                return False
            p, v = p.right, v.right
            continue
        if isinstance(p, UnitVal):
            return isinstance(v, UnitVal)
        return False
