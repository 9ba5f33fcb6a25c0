"""Text format for types, terms, graphs, rules and grammars, plus emitters."""
from .emit import EMITTERS, emit_dot, emit_dsl, emit_json, graph_decl, graph_to_dict
from .errors import DSLSyntaxError, DuplicateName, FrontendError, IncludeError, UnresolvedReference
from .loader import Module, flatten, load, load_file, load_text
from .nodes import SourceFile
from .parser import fixture_dir, parse_file, parse_source, tokenize
from .printer import print_decl, print_source
