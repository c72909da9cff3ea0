"""Name and type resolution for MJ programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import ResolveError
from . import ast as A


@dataclass
class ResolvedProgram:
    program: A.Program
    classes: dict[str, A.ClassDecl]
    superclass: dict[str, Optional[str]]
    # static type of every expression, keyed by eid
    types: dict[int, str] = field(default_factory=dict)
    # Name / assignment-target eids that denote fields: eid -> (declaring class, field)
    field_refs: dict[int, tuple[str, str]] = field(default_factory=dict)
    # call eid -> statically resolved MethodDecl (the one visible in the receiver type)
    call_targets: dict[int, A.MethodDecl] = field(default_factory=dict)
    locals: dict[str, dict[str, str]] = field(default_factory=dict)

    def ancestors(self, cls: str) -> list[str]:
        """``cls`` followed by its superclasses, nearest first."""
        out = []
        c: Optional[str] = cls
        while c is not None:
            out.append(c)
            c = self.superclass[c]
        return out

    def subclasses(self, cls: str) -> list[str]:
        """``cls`` and every transitive subclass, in declaration order."""
        return [c for c in self.classes if cls in self.ancestors(c)]

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sub in self.classes and sup in self.ancestors(sub)

    def lookup_field(self, cls: str, name: str) -> Optional[tuple[str, str]]:
        for c in self.ancestors(cls):
            for f in self.classes[c].fields:
                if f.name == name:
                    return (c, f.name)
        return None

    def field_type(self, key: tuple[str, str]) -> str:
        for f in self.classes[key[0]].fields:
            if f.name == key[1]:
                return f.type
        raise KeyError(key)

    def dispatch(self, cls: str, name: str) -> Optional[A.MethodDecl]:
        """The implementation of ``name`` invoked on a runtime object of class ``cls``."""
        for c in self.ancestors(cls):
            m = self.classes[c].method(name)
            if m is not None:
                return m
        return None

    def method(self, mid: str) -> A.MethodDecl:
        cls, name = mid.split(".")
        m = self.classes[cls].method(name)
        if m is None:
            raise KeyError(mid)
        return m

    def local_type(self, mid: str, name: str) -> str:
        return self.locals[mid][name]


def resolve(program: A.Program) -> ResolvedProgram:
    """Bind every name in ``program`` and compute static expression types.

    Raises :class:`ResolveError` naming the offending symbol on unknown
    classes, fields, methods or locals, on cyclic inheritance, on duplicate
    declarations and on unreachable statements.
    """
    classes: dict[str, A.ClassDecl] = {}
    for c in program.classes:
        if c.name in classes:
            raise ResolveError(f"duplicate class {c.name}", c.name)
        classes[c.name] = c
    superclass = {}
    for c in program.classes:
        if c.superclass is not None and c.superclass not in classes:
            raise ResolveError(f"unknown class {c.superclass}", c.superclass)
        superclass[c.name] = c.superclass
    for c in program.classes:
        seen = {c.name}
        s = superclass[c.name]
        while s is not None:
            if s in seen:
                raise ResolveError(f"cyclic inheritance involving {c.name}", "cycle")
            seen.add(s)
            s = superclass[s]

    rp = ResolvedProgram(program, classes, superclass)
    for c in program.classes:
        _check_members(rp, c)
    for c in program.classes:
        for m in c.methods:
            _MethodResolver(rp, m).run()
    return rp


def _check_type(rp: ResolvedProgram, ty: str) -> None:
    if ty not in A.BUILTIN_TYPES and ty not in rp.classes:
        raise ResolveError(f"unknown type {ty}", ty)


def _check_members(rp: ResolvedProgram, c: A.ClassDecl) -> None:
    names = set()
    for f in c.fields:
        if f.name in names:
            raise ResolveError(f"duplicate field {c.name}.{f.name}", f.name)
        names.add(f.name)
        _check_type(rp, f.type)
    mnames = set()
    for m in c.methods:
        if m.name in mnames:
            raise ResolveError(f"duplicate method {c.name}.{m.name}", m.name)
        mnames.add(m.name)
        if m.ret is not None:
            _check_type(rp, m.ret)
        pnames = set()
        for p in m.params:
            if p.name in pnames or p.name == "this":
                raise ResolveError(f"duplicate parameter {p.name} in {m.mid}", p.name)
            pnames.add(p.name)
            _check_type(rp, p.type)


def completes_normally(body) -> bool:
    """False when ``body`` always ends in return/throw."""
    for s in body:
        if isinstance(s, (A.Return, A.Throw)):
            return False
        if isinstance(s, A.If) and s.orelse:
            if not completes_normally(s.then) and not completes_normally(s.orelse):
                return False
    return True


class _MethodResolver:
    def __init__(self, rp: ResolvedProgram, m: A.MethodDecl):
        self.rp = rp
        self.m = m
        self.vars: dict[str, str] = {p.name: p.type for p in m.params}
        rp.locals[m.mid] = self.vars

    def run(self):
        self.block(self.m.body, set(self.vars))

    def block(self, body, scope: set[str]):
        scope = set(scope)
        for i, s in enumerate(body):
            if i > 0 and not completes_normally(body[:i]):
                raise ResolveError(f"unreachable statement at line {s.line} in {self.m.mid}", "unreachable")
            self.stmt(s, scope)

    def stmt(self, s, scope: set[str]):
        if isinstance(s, A.LocalDecl):
            _check_type(self.rp, s.type)
            if s.name in self.vars:
                raise ResolveError(f"duplicate local {s.name} in {self.m.mid}", s.name)
            if s.init is not None:
                self.expr(s.init, scope)
            self.vars[s.name] = s.type
            scope.add(s.name)
        elif isinstance(s, A.Assign):
            self.expr(s.value, scope)
            self.expr(s.target, scope)
        elif isinstance(s, A.If):
            self.expr(s.cond, scope)
            self.block(s.then, scope)
            self.block(s.orelse, scope)
        elif isinstance(s, A.While):
            self.expr(s.cond, scope)
            self.block(s.body, scope)
        elif isinstance(s, A.Return):
            if s.value is not None:
                self.expr(s.value, scope)
        elif isinstance(s, A.ExprStmt):
            self.expr(s.expr, scope)
        elif isinstance(s, A.Throw):
            t = self.expr(s.value, scope)
            if t in A.BUILTIN_TYPES:
                raise ResolveError(f"cannot throw {t} at line {s.line}", t)

    def _class_type(self, t: str, what: str) -> str:
        if t not in self.rp.classes:
            raise ResolveError(f"{what} on non-object type {t} in {self.m.mid}", what)
        return t

    def expr(self, e, scope: set[str]) -> str:
        rp = self.rp
        if isinstance(e, A.IntLit):
            t = "int"
        elif isinstance(e, A.BoolLit):
            t = "bool"
        elif isinstance(e, A.NullLit):
            t = "null"
        elif isinstance(e, A.This):
            t = self.m.owner
        elif isinstance(e, A.New):
            _check_type(rp, e.cls)
            if e.cls in A.BUILTIN_TYPES:
                raise ResolveError(f"cannot allocate {e.cls}", e.cls)
            t = e.cls
        elif isinstance(e, A.Name):
            if e.name in scope:
                t = self.vars[e.name]
            else:
                key = rp.lookup_field(self.m.owner, e.name)
                if key is None:
                    raise ResolveError(f"unknown symbol {e.name} in {self.m.mid}", e.name)
                rp.field_refs[e.eid] = key
                t = rp.field_type(key)
        elif isinstance(e, A.FieldRead):
            rt = self._class_type(self.expr(e.receiver, scope), e.name)
            key = rp.lookup_field(rt, e.name)
            if key is None:
                raise ResolveError(f"unknown field {rt}.{e.name}", e.name)
            rp.field_refs[e.eid] = key
            t = rp.field_type(key)
        elif isinstance(e, A.Unary):
            self.expr(e.operand, scope)
            t = "bool"
        elif isinstance(e, A.Binary):
            self.expr(e.left, scope)
            self.expr(e.right, scope)
            t = "int" if e.op in "+-*/" else "bool"
        elif isinstance(e, A.Call):
            if e.receiver is None:
                rt = self.m.owner
            else:
                rt = self._class_type(self.expr(e.receiver, scope), e.name)
            target = rp.dispatch(rt, e.name)
            if target is None:
                raise ResolveError(f"unknown method {rt}.{e.name}", e.name)
            if len(target.params) != len(e.args):
                raise ResolveError(f"wrong argument count for {target.mid}", e.name)
            for a in e.args:
                self.expr(a, scope)
            rp.call_targets[e.eid] = target
            t = target.ret if target.ret is not None else "void"
        else:
            raise TypeError(e)
        rp.types[e.eid] = t
        return t
