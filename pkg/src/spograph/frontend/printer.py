"""Source text from the abstract form; re-parsing the output gives it back."""
from __future__ import annotations

from ..lambda_core import show_term, show_type
from .nodes import Def, EdgeDecl, GrammarDecl, GraphBody, GraphDecl, Include, RuleDecl, SourceFile, TypeDecl


def _attr(ty, term) -> str:
    out = ""
    if ty is not None:
        out += f" : {show_type(ty)}"
    if term is not None:
        out += f" = {show_term(term)}"
    return out


def print_body(body: GraphBody, indent="  ") -> list:
    lines = []
    for item in body.elements:
        if isinstance(item, EdgeDecl):
            lines.append(f"{indent}edge {item.id} ({item.src} -> {item.tgt}){_attr(item.type, item.term)};")
        else:
            lines.append(f"{indent}vertex {item.id}{_attr(item.type, item.term)};")
    return lines


def _block(head, lines, indent) -> list:
    if not lines:
        return [f"{indent}{head} {{}}"]
    return [f"{indent}{head} {{", *lines, f"{indent}}}"]


def print_decl(d) -> str:
    if isinstance(d, Include):
        return f'include "{d.path}"'
    if isinstance(d, TypeDecl):
        ctors = "; ".join(f"{c.name} : {show_type(c.type)}" for c in d.constructors)
        return f"type {d.name} = ind {{ {ctors} }}" if ctors else f"type {d.name} = ind {{}}"
    if isinstance(d, Def):
        return f"def {d.name} : {show_type(d.type)} = {show_term(d.term)}"
    if isinstance(d, GraphDecl):
        return "\n".join(_block(f"graph {d.name}", print_body(d.body), ""))
    if isinstance(d, RuleDecl):
        lines = [f"rule {d.name} {{"]
        if d.vars:
            lines.append("  vars { " + "; ".join(f"{n} : {show_type(t)}" for n, t in d.vars) + " }")
        lines += _block("lhs", print_body(d.lhs, "    "), "  ")
        lines += _block("rhs", print_body(d.rhs, "    "), "  ")
        lines.append("  map { " + "; ".join(f"{a} -> {b}" for a, b in d.map) + " }" if d.map else "  map {}")
        if d.adr is not None:
            lines.append("  adr { " + "; ".join(f"{a} -> {b}" for a, b in d.adr) + " }" if d.adr else "  adr {}")
        if d.cmp:
            lines += _block("cmp", [f"    {v} = {show_term(t)};" for v, t in d.cmp], "  ")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, GrammarDecl):
        lines = [f"grammar {d.name} {{"]
        if d.max_steps is not None:
            lines.append(f"  max_steps {d.max_steps}")
        if d.fuel is not None:
            lines.append(f"  fuel {d.fuel}")
        for num, items in d.layers:
            parts = []
            for it in items:
                if it.bound is None:
                    parts.append(it.rule)
                elif it.bound == 1:
                    parts.append(f"once {it.rule}")
                else:
                    parts.append(f"limit {it.bound} {it.rule}")
            lines.append(f"  layer {num} {{ " + "; ".join(parts) + " }" if parts else f"  layer {num} {{}}")
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(f"not a declaration: {d!r}")


def print_source(source: SourceFile) -> str:
    return "".join(print_decl(d) + "\n\n" for d in source.decls).rstrip("\n") + ("\n" if source.decls else "")
