"""``agr`` command line.

Exit status: 0 success, 1 usage, 2 parse or type errors, 3 runtime limits.
``AGR_FUEL`` overrides the normalization fuel.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from ..engine import EngineError, StepLimitExceeded, run
from ..graph_model import GraphError
from ..lambda_core import DEFAULT_FUEL, FuelExhausted, LambdaError, fuel_limit, normalize, show_term, show_type
from ..morphism import MorphismError, validate_morphism
from ..rewrite import RewriteError, find_matches, validate_rule, weak_pushout
from .emit import EMITTERS
from .errors import FrontendError, UnresolvedReference
from .loader import load_file

EXIT_USAGE, EXIT_STATIC, EXIT_RUNTIME = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="agr", description="Rewrite graphs attributed by typed lambda terms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="parse, typecheck and validate a file")
    c.add_argument("file")

    m = sub.add_parser("match", help="list the matches of a rule in a graph")
    m.add_argument("file")
    m.add_argument("--rule", required=True)
    m.add_argument("--graph", required=True)

    a = sub.add_parser("apply", help="apply a rule once")
    a.add_argument("file")
    a.add_argument("--rule", required=True)
    a.add_argument("--graph", required=True)
    a.add_argument("--match", type=int, default=0)
    a.add_argument("--emit", choices=sorted(EMITTERS), default="dsl")

    r = sub.add_parser("run", help="run a layered grammar")
    r.add_argument("file")
    r.add_argument("--grammar", required=True)
    r.add_argument("--graph", required=True)
    r.add_argument("--max-steps", type=int)
    r.add_argument("--emit", choices=sorted(EMITTERS), default="dsl")
    r.add_argument("--trace", metavar="PATH", help="write the trace (JSON, or a log for *.log)")
    r.add_argument("--strategy", choices=["first", "random"], default="first")
    r.add_argument("--seed", type=int)

    n = sub.add_parser("normalize", help="print the normal form of a definition")
    n.add_argument("file")
    n.add_argument("--term", required=True)
    return p


def _fuel() -> int:
    raw = os.environ.get("AGR_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        value = int(raw)
    except ValueError:
        raise _Usage(f"AGR_FUEL must be an integer, got {raw!r}") from None
    if value <= 0:
        raise _Usage("AGR_FUEL must be positive")
    return value


class _Usage(Exception):
    pass


def _check(mod, out):
    problems = []
    for name, rule in mod.rules.items():
        problems += [f"rule {name}: {p}" for p in validate_rule(rule)]
    for line in problems:
        print(line, file=sys.stderr)
    if problems:
        return EXIT_STATIC
    print(
        f"ok: {len(mod.env)} types, {len(mod.defs)} definitions, {len(mod.graphs)} graphs, "
        f"{len(mod.rules)} rules, {len(mod.grammars)} grammars",
        file=out,
    )
    return 0


def _match(mod, args, out):
    rule, G = mod.rule(args.rule), mod.graph(args.graph)
    matches = find_matches(rule, G)
    for k, mt in enumerate(matches):
        sigma = ", ".join(f"{n} = {show_term(t)}" for n, t in sorted(mt.sigma.items()))
        emb = ", ".join(f"{x} -> {y}" for x, y in sorted(mt.assignment.items()))
        print(f"match {k}: sigma {{{sigma}}} embedding {{{emb}}}", file=out)
    print(f"{len(matches)} match(es)", file=out)
    return 0


def _apply(mod, args, out):
    rule, G = mod.rule(args.rule), mod.graph(args.graph)
    matches = find_matches(rule, G)
    if not matches:
        print(f"rule {args.rule} does not match graph {args.graph}", file=sys.stderr)
        return EXIT_RUNTIME
    if not 0 <= args.match < len(matches):
        raise _Usage(f"--match {args.match} out of range (0..{len(matches) - 1})")
    mt = matches[args.match]
    res = weak_pushout(mt.instance.morphism, mt.embedding)
    out.write(EMITTERS[args.emit](res.H, args.graph))
    return 0


def _run(mod, args, out, fuel):
    grammar = dataclasses.replace(mod.grammar(args.grammar), fuel=fuel)
    G = mod.graph(args.graph)
    trace = run(grammar, G, max_steps=args.max_steps, strategy=args.strategy, seed=args.seed)
    if args.trace:
        text = trace.to_log() if args.trace.endswith(".log") else trace.to_json(indent=2) + "\n"
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(trace.to_log())
    out.write(EMITTERS[args.emit](trace.final, args.graph))
    if trace.truncated:
        print(f"stopped after {trace.step_count} steps (max-steps reached)", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


def _normalize(mod, args, out):
    attr = mod.term(args.term)
    print(f"{show_term(normalize(mod.ctx, attr.term))} : {show_type(attr.type)}", file=out)
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        fuel = _fuel()
        if not os.path.isfile(args.file):
            raise _Usage(f"no such file: {args.file}")
        with fuel_limit(fuel):
            try:
                mod = load_file(args.file)
            except (FrontendError, LambdaError, GraphError, MorphismError, RewriteError, EngineError) as exc:
                if isinstance(exc, FuelExhausted):
                    raise
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
                return EXIT_STATIC
            if args.command == "check":
                return _check(mod, out)
            if args.command == "match":
                return _match(mod, args, out)
            if args.command == "apply":
                return _apply(mod, args, out)
            if args.command == "run":
                return _run(mod, args, out, fuel)
            return _normalize(mod, args, out)
    except _Usage as exc:
        print(f"agr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnresolvedReference as exc:
        print(f"agr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FuelExhausted, StepLimitExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (LambdaError, GraphError, MorphismError, RewriteError, EngineError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
