"""AST node types for MJ, the small Java-like language analysed by mergeifc.

Line numbers and expression ids are excluded from equality so that two
programs compare equal when they have the same structure and names.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

BUILTIN_TYPES = ("int", "bool")


# -- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class BoolLit:
    value: bool
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class NullLit:
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class This:
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Name:
    """A bare identifier: a local, a parameter or an implicit ``this`` field."""
    name: str
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class FieldRead:
    receiver: "Expr"
    name: str
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Call:
    receiver: Optional["Expr"]  # None means implicit this
    name: str
    args: tuple["Expr", ...]
    eid: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class New:
    cls: str
    eid: int = field(default=-1, compare=False)


Expr = Union[IntLit, BoolLit, NullLit, This, Name, FieldRead, Binary, Unary, Call, New]


# -- statements ------------------------------------------------------------

@dataclass(frozen=True)
class LocalDecl:
    type: str
    name: str
    init: Optional[Expr]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    target: Union[Name, FieldRead]
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExprStmt:
    expr: Call
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Throw:
    value: Expr
    line: int = field(default=0, compare=False)


Stmt = Union[LocalDecl, Assign, If, While, Return, ExprStmt, Throw]


# -- declarations ----------------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str
    type: str


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MethodDecl:
    owner: str
    name: str
    params: tuple[Param, ...]
    ret: Optional[str]  # None for void
    body: tuple[Stmt, ...]
    first_line: int = field(default=0, compare=False)
    last_line: int = field(default=0, compare=False)

    @property
    def mid(self) -> str:
        return f"{self.owner}.{self.name}"

    @property
    def line_span(self) -> range:
        return range(self.first_line, self.last_line + 1)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    superclass: Optional[str]
    fields: tuple[FieldDecl, ...]
    methods: tuple[MethodDecl, ...]
    first_line: int = field(default=0, compare=False)
    last_line: int = field(default=0, compare=False)

    def method(self, name: str) -> Optional[MethodDecl]:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class Program:
    classes: tuple[ClassDecl, ...]
    source_name: str = field(default="<string>", compare=False)

    def cls(self, name: str) -> Optional[ClassDecl]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def methods(self):
        for c in self.classes:
            yield from c.methods


def walk_stmts(body):
    """Yield every statement in ``body`` in source order, descending into blocks."""
    for s in body:
        yield s
        if isinstance(s, If):
            yield from walk_stmts(s.then)
            yield from walk_stmts(s.orelse)
        elif isinstance(s, While):
            yield from walk_stmts(s.body)


def sub_exprs(e):
    """Yield ``e`` and all its subexpressions, children before parents."""
    if isinstance(e, FieldRead):
        yield from sub_exprs(e.receiver)
    elif isinstance(e, Binary):
        yield from sub_exprs(e.left)
        yield from sub_exprs(e.right)
    elif isinstance(e, Unary):
        yield from sub_exprs(e.operand)
    elif isinstance(e, Call):
        if e.receiver is not None:
            yield from sub_exprs(e.receiver)
        for a in e.args:
            yield from sub_exprs(a)
    yield e


def stmt_exprs(s):
    """Top-level expressions evaluated by statement ``s`` itself (not nested blocks)."""
    if isinstance(s, LocalDecl):
        return [s.init] if s.init is not None else []
    if isinstance(s, Assign):
        if isinstance(s.target, FieldRead):
            return [s.target.receiver, s.value]
        return [s.value]
    if isinstance(s, (If, While)):
        return [s.cond]
    if isinstance(s, Return):
        return [s.value] if s.value is not None else []
    if isinstance(s, ExprStmt):
        return [s.expr]
    if isinstance(s, Throw):
        return [s.value]
    raise TypeError(s)
