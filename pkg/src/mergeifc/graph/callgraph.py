"""Call-graph construction at two precisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..lang import ast as A
from ..lang.resolver import ResolvedProgram
from .config import Precision
from .pointsto import PointsTo, points_to


@dataclass(frozen=True)
class CallSite:
    eid: int
    caller: str
    line: int
    name: str


@dataclass
class CallGraph:
    precision: Precision
    sites: dict[int, CallSite] = field(default_factory=dict)
    targets: dict[int, frozenset[str]] = field(default_factory=dict)

    def edges(self) -> set[tuple[int, str]]:
        return {(eid, t) for eid, ts in self.targets.items() for t in ts}

    def callees(self, mid: str) -> set[str]:
        return {t for eid, ts in self.targets.items() if self.sites[eid].caller == mid for t in ts}


def receiver_type(rp: ResolvedProgram, m: A.MethodDecl, call: A.Call) -> str:
    return m.owner if call.receiver is None else rp.types[call.receiver.eid]


def iter_calls(m: A.MethodDecl):
    """``(statement, call)`` for every call expression in ``m``, inner calls first."""
    for s in A.walk_stmts(m.body):
        for root in A.stmt_exprs(s):
            for e in A.sub_exprs(root):
                if isinstance(e, A.Call):
                    yield s, e


def build_call_graph(rp: ResolvedProgram, precision: Precision,
                     pts: Optional[PointsTo] = None, entry_points: Iterable[str] = ()) -> CallGraph:
    """Resolve every call site in the program.

    TYPE_BASED uses the class hierarchy: the implementation visible in the
    receiver's static type plus every override below it. INSTANCE_BASED keeps
    only implementations dispatched from the receiver's points-to set, and is
    therefore always a subset of TYPE_BASED at each site.
    """
    if precision is Precision.INSTANCE_BASED and pts is None:
        pts = points_to(rp, entry_points)
    cg = CallGraph(precision)
    for m in rp.program.methods():
        for s, call in iter_calls(m):
            cg.sites[call.eid] = CallSite(call.eid, m.mid, s.line, call.name)
            static = receiver_type(rp, m, call)
            hierarchy = set()
            for c in rp.subclasses(static):
                t = rp.dispatch(c, call.name)
                if t is not None:
                    hierarchy.add(t.mid)
            if precision is Precision.TYPE_BASED:
                cg.targets[call.eid] = frozenset(hierarchy)
                continue
            found = set()
            for obj in pts.of_receiver(call.eid):
                if rp.is_subtype(obj.cls, static):
                    t = rp.dispatch(obj.cls, call.name)
                    if t is not None:
                        found.add(t.mid)
            cg.targets[call.eid] = frozenset(found & hierarchy)
    return cg
