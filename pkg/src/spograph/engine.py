"""Layered grammar execution with reproducible traces."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ._deep import deep
from .graph_model import Graph, graph_equal
from .lambda_core import DEFAULT_FUEL, fuel_limit, show_term
from .rewrite import Match, PushoutResult, RuleScheme, find_matches, weak_pushout

DEFAULT_MAX_STEPS = 10_000


class EngineError(Exception):
    pass


class StepLimitExceeded(EngineError):
    def __init__(self, trace):
        self.trace = trace
        super().__init__(f"stopped after {trace.step_count} steps (max-steps reached)")


@dataclass(frozen=True)
class LayerEntry:
    """A rule inside a layer; ``bound`` caps its applications (None: unbounded)."""

    rule: RuleScheme
    bound: Optional[int] = None


@dataclass(frozen=True, eq=False)
class Grammar:
    name: str
    layers: Mapping[int, tuple]
    max_steps: int = DEFAULT_MAX_STEPS
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        layers = {int(k): tuple(v) for k, v in sorted(dict(self.layers).items())}
        if layers and sorted(layers) != list(range(1, len(layers) + 1)):
            raise EngineError(f"layers must be numbered 1..n, got {sorted(layers)}")
        names = [e.rule.name for entries in layers.values() for e in entries]
        if len(names) != len(set(names)):
            raise EngineError("each rule belongs to exactly one layer")
        object.__setattr__(self, "layers", layers)

    @property
    def rules(self) -> list:
        return [e.rule for k in sorted(self.layers) for e in self.layers[k]]

    def layer_of(self, rule_name) -> int:
        for k, entries in self.layers.items():
            if any(e.rule.name == rule_name for e in entries):
                return k
        raise KeyError(rule_name)

    def rule(self, rule_name) -> RuleScheme:
        for r in self.rules:
            if r.name == rule_name:
                return r
        raise KeyError(rule_name)


def make_grammar(name, layers, **kwargs) -> Grammar:
    """``layers`` maps layer numbers to lists of rules or ``(rule, bound)`` pairs."""
    norm = {}
    for k, entries in dict(layers).items():
        out = []
        for e in entries:
            if isinstance(e, LayerEntry):
                out.append(e)
            elif isinstance(e, tuple):
                out.append(LayerEntry(*e))
            else:
                out.append(LayerEntry(e))
        norm[k] = out
    return Grammar(name, norm, **kwargs)


@dataclass(frozen=True, eq=False)
class TraceStep:
    index: int
    layer: int
    rule: str
    sigma: Mapping
    matched: Mapping[int, int]
    deleted: tuple
    graph: Graph
    result: PushoutResult = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "layer": self.layer,
            "rule": self.rule,
            "sigma": {k: show_term(v) for k, v in sorted(self.sigma.items())},
            "matched": {str(x): y for x, y in sorted(self.matched.items())},
            "deleted": list(self.deleted),
        }


@dataclass(frozen=True, eq=False)
class Trace:
    grammar: str
    start: Graph
    steps: tuple
    final: Graph
    truncated: bool = False

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def counts(self) -> dict:
        out = {}
        for s in self.steps:
            out[s.rule] = out.get(s.rule, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "grammar": self.grammar,
            "step_count": self.step_count,
            "truncated": self.truncated,
            "counts": self.counts,
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_log(self) -> str:
        lines = []
        for s in self.steps:
            sigma = ", ".join(f"{k} = {show_term(v)}" for k, v in sorted(s.sigma.items()))
            matched = " ".join(f"{x}->{y}" for x, y in sorted(s.matched.items()))
            deleted = " ".join(map(str, s.deleted)) or "-"
            lines.append(
                f"step {s.index} layer {s.layer} rule {s.rule} sigma {{{sigma}}} "
                f"match {{{matched}}} deleted {deleted}"
            )
        lines.append(f"steps {self.step_count}{' truncated' if self.truncated else ''}")
        return "\n".join(lines) + "\n"


@deep
def step(grammar: Grammar, G: Graph, layer: int, applied: Mapping[str, int] = None, *, rng=None):
    """Apply the first matching rule of ``layer`` at its first match.

    Rules are scanned in declaration order; a rule that reached its bound is
    skipped.  With ``rng`` a random (rule, match) pair is chosen instead.
    Returns ``(rule, Match, PushoutResult)`` or None.
    """
    applied = applied or {}
    options = []
    for entry in grammar.layers.get(layer, ()):
        if entry.bound is not None and applied.get(entry.rule.name, 0) >= entry.bound:
            continue
        matches = find_matches(entry.rule, G)
        if not matches:
            continue
        if rng is None:
            m = matches[0]
            return entry.rule, m, weak_pushout(m.instance.morphism, m.embedding)
        options.extend((entry.rule, m) for m in matches)
    if not options:
        return None
    rule, m = rng.choice(options)
    return rule, m, weak_pushout(m.instance.morphism, m.embedding)


@deep
def run(
    grammar: Grammar,
    G: Graph,
    *,
    max_steps: int = None,
    strategy: str = "first",
    seed: int = None,
    strict: bool = False,
) -> Trace:
    """Run each layer to exhaustion in order, never returning to earlier ones.

    Stops after ``max_steps`` applications with ``truncated`` set; with
    ``strict`` that raises ``StepLimitExceeded`` carrying the partial trace.
    """
    limit = grammar.max_steps if max_steps is None else max_steps
    if strategy not in ("first", "random"):
        raise EngineError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed) if strategy == "random" else None
    steps = []
    applied = {}
    current = G
    truncated = False
    with fuel_limit(grammar.fuel):
        for layer in sorted(grammar.layers):
            while True:
                if len(steps) >= limit:
                    truncated = _has_step(grammar, current, layer, applied)
                    break
                out = step(grammar, current, layer, applied, rng=rng)
                if out is None:
                    break
                rule, m, res = out
                applied[rule.name] = applied.get(rule.name, 0) + 1
                steps.append(
                    TraceStep(len(steps), layer, rule.name, m.sigma, m.assignment, res.deleted, res.H, res)
                )
                current = res.H
            if truncated:
                break
    trace = Trace(grammar.name, G, tuple(steps), current, truncated)
    if truncated and strict:
        raise StepLimitExceeded(trace)
    return trace


def _has_step(grammar, G, layer, applied) -> bool:
    for k in sorted(grammar.layers):
        if k < layer:
            continue
        for entry in grammar.layers[k]:
            if entry.bound is not None and applied.get(entry.rule.name, 0) >= entry.bound:
                continue
            if find_matches(entry.rule, G):
                return True
    return False


@deep
def replay(grammar: Grammar, trace: Trace) -> bool:
    """Re-apply each recorded step and check the final graph is reproduced."""
    current = trace.start
    with fuel_limit(grammar.fuel):
        for s in trace.steps:
            rule = grammar.rule(s.rule)
            match = next(
                (m for m in find_matches(rule, current) if m.assignment == dict(s.matched)),
                None,
            )
            if match is None:
                return False
            current = weak_pushout(match.instance.morphism, match.embedding).H
            if not graph_equal(current, s.graph):
                return False
    return graph_equal(current, trace.final)
