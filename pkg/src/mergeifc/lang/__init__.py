"""MJ front end: parsing, resolution and pretty-printing."""
from .ast import ClassDecl, MethodDecl, Program
from .parser import parse, tokenize
from .pretty import lint_one_statement_per_line, pretty
from .resolver import ResolvedProgram, resolve

__all__ = [
    "ClassDecl", "MethodDecl", "Program", "ResolvedProgram",
    "lint_one_statement_per_line", "parse", "pretty", "resolve", "tokenize",
]
