"""Flow-insensitive, inclusion-based (Andersen-style) points-to analysis.

Abstract objects are allocation sites. Fields are modelled field-based (one
abstract location per declared field), and calls are resolved on the fly
from the receiver's points-to set.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from ..lang import ast as A
from ..lang.resolver import ResolvedProgram


class AllocSite(NamedTuple):
    method: str
    line: int
    cls: str
    eid: int  # negative for synthetic objects standing in for unknown callers

    def __str__(self):
        return f"{self.cls}@{self.method}:{self.line}"


@dataclass
class PointsTo:
    pts: dict = field(default_factory=lambda: defaultdict(set))

    def of_var(self, mid: str, name: str) -> frozenset[AllocSite]:
        return frozenset(self.pts.get(("v", mid, name), ()))

    def of_expr(self, eid: int) -> frozenset[AllocSite]:
        return frozenset(self.pts.get(("e", eid), ()))

    def of_field(self, key) -> frozenset[AllocSite]:
        return frozenset(self.pts.get(("f",) + tuple(key), ()))

    def of_receiver(self, call_eid: int) -> frozenset[AllocSite]:
        """Objects the receiver of call ``call_eid`` may denote (implicit ``this`` included)."""
        return frozenset(self.pts.get(("recv", call_eid), ()))


@dataclass
class _CallSite:
    caller: str
    name: str
    recv: tuple
    args: list
    result: tuple


class _Constraints:
    def __init__(self, rp: ResolvedProgram):
        self.rp = rp
        self.base: dict = defaultdict(set)
        self.copy: set = set()
        self.calls: list[_CallSite] = []

    def method(self, m: A.MethodDecl):
        for s in A.walk_stmts(m.body):
            self.stmt(m, s)

    def stmt(self, m, s):
        rp = self.rp
        if isinstance(s, A.LocalDecl):
            if s.init is not None:
                self.flow(self.expr(m, s.init, s.line), ("v", m.mid, s.name))
        elif isinstance(s, A.Assign):
            src = self.expr(m, s.value, s.line)
            t = s.target
            if isinstance(t, A.FieldRead):
                self.expr(m, t.receiver, s.line)
                self.flow(src, ("f",) + rp.field_refs[t.eid])
            elif t.eid in rp.field_refs:
                self.flow(src, ("f",) + rp.field_refs[t.eid])
            else:
                self.flow(src, ("v", m.mid, t.name))
        elif isinstance(s, A.Return):
            if s.value is not None:
                self.flow(self.expr(m, s.value, s.line), ("ret", m.mid))
        else:
            for e in A.stmt_exprs(s):
                self.expr(m, e, s.line)

    def flow(self, src: Optional[tuple], dst: tuple):
        if src is not None:
            self.copy.add((src, dst))

    def expr(self, m, e, line) -> Optional[tuple]:
        """Constraint variable holding the value of ``e``; None for non-references."""
        rp = self.rp
        if isinstance(e, A.Name):
            if e.eid in rp.field_refs:
                return ("f",) + rp.field_refs[e.eid]
            return ("v", m.mid, e.name)
        if isinstance(e, A.This):
            return ("v", m.mid, "this")
        if isinstance(e, A.New):
            v = ("e", e.eid)
            self.base[v].add(AllocSite(m.mid, line, e.cls, e.eid))
            return v
        if isinstance(e, A.FieldRead):
            self.expr(m, e.receiver, line)
            return ("f",) + rp.field_refs[e.eid]
        if isinstance(e, A.Call):
            recv = ("v", m.mid, "this") if e.receiver is None else self.expr(m, e.receiver, line)
            args = [self.expr(m, a, line) for a in e.args]
            v = ("e", e.eid)
            self.calls.append(_CallSite(m.mid, e.name, recv, args, v))
            if recv is not None:
                self.copy.add((recv, ("recv", e.eid)))
            return v
        if isinstance(e, A.Binary):
            self.expr(m, e.left, line)
            self.expr(m, e.right, line)
        elif isinstance(e, A.Unary):
            self.expr(m, e.operand, line)
        return None


def _seed_entry(rp: ResolvedProgram, m: A.MethodDecl) -> dict:
    """Synthetic receiver and parameter objects for a method with unknown callers."""
    seeds = defaultdict(set)
    k = 0
    for c in rp.subclasses(m.owner):
        if rp.dispatch(c, m.name) is m:
            k += 1
            seeds[("v", m.mid, "this")].add(AllocSite(m.mid, m.first_line, c, -k))
    for p in m.params:
        if p.type in rp.classes:
            for c in rp.subclasses(p.type):
                k += 1
                seeds[("v", m.mid, p.name)].add(AllocSite(m.mid, m.first_line, c, -k))
    return seeds


def points_to(rp: ResolvedProgram, entry_points: Iterable[str] = ()) -> PointsTo:
    """Solve inclusion constraints for the whole program.

    Methods listed in ``entry_points`` have unknown callers, so their
    receiver and reference parameters start out pointing to one synthetic
    object per compatible class.
    """
    cons = _Constraints(rp)
    for m in rp.program.methods():
        cons.method(m)
    pts = PointsTo()
    for v, objs in cons.base.items():
        pts.pts[v] |= objs
    for mid in sorted(entry_points):
        for v, objs in _seed_entry(rp, rp.method(mid)).items():
            pts.pts[v] |= objs

    succ = defaultdict(set)
    for a, b in cons.copy:
        succ[a].add(b)
    bound = set()  # (call index, target mid) already linked
    changed = True
    while changed:
        changed = False
        for a in list(succ):
            src = pts.pts.get(a)
            if not src:
                continue
            for b in succ[a]:
                if not src <= pts.pts[b]:
                    pts.pts[b] |= src
                    changed = True
        for i, cs in enumerate(cons.calls):
            if cs.recv is None:
                continue
            for obj in list(pts.pts.get(cs.recv, ())):
                target = rp.dispatch(obj.cls, cs.name)
                if target is None or len(target.params) != len(cs.args):
                    continue
                this_v = ("v", target.mid, "this")
                if obj not in pts.pts[this_v]:
                    pts.pts[this_v].add(obj)
                    changed = True
                if (i, target.mid) in bound:
                    continue
                bound.add((i, target.mid))
                changed = True
                for arg, p in zip(cs.args, target.params):
                    if arg is not None:
                        succ[arg].add(("v", target.mid, p.name))
                succ[("ret", target.mid)].add(cs.result)
    return pts
