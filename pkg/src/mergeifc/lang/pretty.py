"""Pretty-printing in one-statement-per-line normal form, and the matching lint."""
from __future__ import annotations

from collections import Counter

from . import ast as A

_PREC = {"||": 0, "&&": 1, "==": 2, "<": 3, "+": 4, "-": 4, "*": 5, "/": 5}


def format_expr(e, prec: int = -1) -> str:
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.NullLit):
        return "null"
    if isinstance(e, A.This):
        return "this"
    if isinstance(e, A.Name):
        return e.name
    if isinstance(e, A.New):
        return f"new {e.cls}()"
    if isinstance(e, A.FieldRead):
        return f"{format_expr(e.receiver, 99)}.{e.name}"
    if isinstance(e, A.Call):
        args = ", ".join(format_expr(a) for a in e.args)
        if e.receiver is None:
            return f"{e.name}({args})"
        return f"{format_expr(e.receiver, 99)}.{e.name}({args})"
    if isinstance(e, A.Unary):
        s = "!" + format_expr(e.operand, 98)
        return f"({s})" if prec > 98 else s
    if isinstance(e, A.Binary):
        p = _PREC[e.op]
        # operators are left-associative: the right operand needs a tighter bound
        s = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p + 1)}"
        return f"({s})" if p < prec else s
    raise TypeError(e)


def _stmt_lines(s, indent: str) -> list[str]:
    inner = indent + "    "
    if isinstance(s, A.LocalDecl):
        init = "" if s.init is None else f" = {format_expr(s.init)}"
        return [f"{indent}{s.type} {s.name}{init};"]
    if isinstance(s, A.Assign):
        return [f"{indent}{format_expr(s.target)} = {format_expr(s.value)};"]
    if isinstance(s, A.Return):
        return [f"{indent}return;" if s.value is None else f"{indent}return {format_expr(s.value)};"]
    if isinstance(s, A.Throw):
        return [f"{indent}throw {format_expr(s.value)};"]
    if isinstance(s, A.ExprStmt):
        return [f"{indent}{format_expr(s.expr)};"]
    if isinstance(s, A.If):
        out = [f"{indent}if ({format_expr(s.cond)}) {{"]
        for t in s.then:
            out += _stmt_lines(t, inner)
        if s.orelse:
            out.append(f"{indent}}} else {{")
            for t in s.orelse:
                out += _stmt_lines(t, inner)
        out.append(f"{indent}}}")
        return out
    if isinstance(s, A.While):
        out = [f"{indent}while ({format_expr(s.cond)}) {{"]
        for t in s.body:
            out += _stmt_lines(t, inner)
        out.append(f"{indent}}}")
        return out
    raise TypeError(s)


def format_method(m: A.MethodDecl, indent: str = "    ") -> list[str]:
    params = ", ".join(f"{p.type} {p.name}" for p in m.params)
    ret = m.ret if m.ret is not None else "void"
    out = [f"{indent}{ret} {m.name}({params}) {{"]
    for s in m.body:
        out += _stmt_lines(s, indent + "    ")
    out.append(f"{indent}}}")
    return out


def pretty(program: A.Program) -> str:
    lines: list[str] = []
    for c in program.classes:
        ext = f" extends {c.superclass}" if c.superclass else ""
        lines.append(f"class {c.name}{ext} {{")
        for f in c.fields:
            lines.append(f"    {f.type} {f.name};")
        for m in c.methods:
            lines += format_method(m)
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")


def lint_one_statement_per_line(program: A.Program) -> list[tuple[str, int]]:
    """Return ``(method id, line)`` for every line that starts more than one statement."""
    bad = []
    for m in program.methods():
        counts = Counter(s.line for s in A.walk_stmts(m.body))
        bad += [(m.mid, ln) for ln, n in sorted(counts.items()) if n > 1]
    return bad
