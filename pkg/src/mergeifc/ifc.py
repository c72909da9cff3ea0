"""Information-flow checks between the two contributions of a merge.

Nodes on lines edited by one side are sources, nodes on lines edited by the
other side are sinks, and a flow is a realizable SDG path between them.
When neither direction has a flow, both sides are sliced into the unedited
("base") part of the program and any node reached from both is reported as
a common target.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import NoSourceOrSink
from .graph.sdg import (
    ACTUAL_IN, ACTUAL_OUT, CALL, CALL_EDGE, ENTRY_NODE, INTRA_KINDS, PARAM_IN, PARAM_OUT,
    PREDICATE, STATEMENT, Sdg,
)
from .merge import MethodEdit, Origin

# formal-in/out nodes sit on the header line by convention only, so they are
# never annotated and never count as common targets
ANNOTATABLE = frozenset({ENTRY_NODE, STATEMENT, PREDICATE, CALL, ACTUAL_IN, ACTUAL_OUT})

_PHASE1 = INTRA_KINDS | {PARAM_OUT}
_PHASE2 = INTRA_KINDS | {PARAM_IN, CALL_EDGE}


class Direction(str, enum.Enum):
    LEFT_TO_RIGHT = "LEFT_TO_RIGHT"
    RIGHT_TO_LEFT = "RIGHT_TO_LEFT"
    INDIRECT_COMMON_TARGET = "INDIRECT_COMMON_TARGET"


_DIR_ORDER = {d: i for i, d in enumerate(Direction)}


class Status(str, enum.Enum):
    FLOW_FOUND = "FLOW_FOUND"
    NO_FLOW = "NO_FLOW"
    NO_SOURCE_OR_SINK = "NO_SOURCE_OR_SINK"


@dataclass(frozen=True)
class Annotation:
    sources: frozenset[str]
    sinks: frozenset[str]
    scope: MethodEdit


@dataclass(frozen=True)
class FlowFinding:
    direction: Direction
    source_line: int
    sink_line: int
    target_line: Optional[int] = None
    left_lines: tuple[int, ...] = ()
    right_lines: tuple[int, ...] = ()
    witness: tuple[str, ...] = field(default=(), compare=False)
    witness_edges: tuple[str, ...] = field(default=(), compare=False)

    @property
    def key(self):
        return (_DIR_ORDER[self.direction], self.source_line, self.sink_line, self.target_line or 0)

    def as_dict(self) -> dict:
        d = {"direction": self.direction.value, "source_line": self.source_line,
             "sink_line": self.sink_line}
        if self.direction is Direction.INDIRECT_COMMON_TARGET:
            d.update(target_line=self.target_line, left_lines=list(self.left_lines),
                     right_lines=list(self.right_lines))
        d["witness"] = list(self.witness)
        d["witness_edges"] = list(self.witness_edges)
        return d


@dataclass
class MethodResult:
    method: str
    status: Status
    findings: list[FlowFinding] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {d.value: 0 for d in Direction}
        for f in self.findings:
            out[f.direction.value] += 1
        return out

    @property
    def direct(self) -> list[FlowFinding]:
        return [f for f in self.findings if f.direction is not Direction.INDIRECT_COMMON_TARGET]

    @property
    def indirect(self) -> list[FlowFinding]:
        return [f for f in self.findings if f.direction is Direction.INDIRECT_COMMON_TARGET]


# -- slicing -------------------------------------------------------------------

def _two_phase(sdg: Sdg, start: Iterable[str]):
    """Context-sensitive forward reachability with BFS parent pointers.

    Phase 1 stays in the current procedure or ascends into callers (param-out),
    crossing calls only through summary edges. Phase 2 restarts from everything
    phase 1 found and descends into callees (call, param-in) without ascending.
    """
    parent: dict[str, Optional[tuple[str, str]]] = {}
    q = deque()
    for s in sorted(set(start)):
        parent[s] = None
        q.append(s)
    for kinds in (_PHASE1, _PHASE2):
        if kinds is _PHASE2:
            q = deque(sorted(parent))
        seen = set(q)
        while q:
            u = q.popleft()
            for v, k in sorted(sdg.succ.get(u, ())):
                if k in kinds and v not in seen:
                    seen.add(v)
                    if v not in parent:
                        parent[v] = (u, k)
                    q.append(v)
    return parent


def forward_slice(sdg: Sdg, start: Iterable[str]) -> set[str]:
    """Nodes reachable from ``start`` along realizable (call/return-balanced) paths."""
    return set(_two_phase(sdg, start))


def _witness(parent, node):
    nodes, kinds = [node], []
    while parent[node] is not None:
        node, k = parent[node]
        nodes.append(node)
        kinds.append(k)
    return tuple(reversed(nodes)), tuple(reversed(kinds))


# -- annotation ----------------------------------------------------------------

def _nodes_on(sdg: Sdg, method: str, lines) -> dict[int, set[str]]:
    out: dict[int, set[str]] = {}
    for n in sdg.nodes_of(method):
        if n.kind in ANNOTATABLE and n.line in lines:
            out.setdefault(n.line, set()).add(n.id)
    return out


def annotate(sdg: Sdg, edit: MethodEdit, direction: Direction) -> Annotation:
    """Mark the edit's nodes as sources (HIGH) and sinks (LOW).

    LEFT_TO_RIGHT takes left-edited lines as sources; RIGHT_TO_LEFT inverts.
    Raises :class:`NoSourceOrSink` when either side maps to no node.
    """
    if edit.method not in sdg.entries:
        raise ValueError(f"{edit.method} is not part of the SDG")
    left = set().union(*_nodes_on(sdg, edit.method, edit.left_lines).values())
    right = set().union(*_nodes_on(sdg, edit.method, edit.right_lines).values())
    if not left or not right:
        side = "left" if not left else "right"
        raise NoSourceOrSink(f"{edit.method}: no instructions on lines edited by {side}")
    if direction is Direction.LEFT_TO_RIGHT:
        return Annotation(frozenset(left), frozenset(right), edit)
    if direction is Direction.RIGHT_TO_LEFT:
        return Annotation(frozenset(right), frozenset(left), edit)
    raise ValueError(direction)


# -- flows -----------------------------------------------------------------------

def _line_flows(sdg, by_line: dict[int, set[str]], targets: set[str]):
    """For each source line, the nodes in ``targets`` it reaches, with one witness each."""
    out = {}
    for line in sorted(by_line):
        parent = _two_phase(sdg, by_line[line])
        out[line] = {t: _witness(parent, t) for t in sorted(targets) if t in parent}
    return out


def direct_flow(sdg: Sdg, edit: MethodEdit) -> list[FlowFinding]:
    """Flows from left-edited to right-edited nodes and back, as line pairs."""
    findings = []
    for direction in (Direction.LEFT_TO_RIGHT, Direction.RIGHT_TO_LEFT):
        ann = annotate(sdg, edit, direction)
        src_lines = edit.left_lines if direction is Direction.LEFT_TO_RIGHT else edit.right_lines
        by_line = _nodes_on(sdg, edit.method, src_lines)
        for line, reached in _line_flows(sdg, by_line, set(ann.sinks)).items():
            for t, (path, kinds) in reached.items():
                findings.append(FlowFinding(direction, line, sdg.nodes[t].line,
                                            witness=path, witness_edges=kinds))
    return translate(findings)


def base_nodes(sdg: Sdg, edit: MethodEdit, attribution: dict[int, Origin]) -> set[str]:
    """Annotatable nodes on BASE lines of the edited method and everything it calls."""
    methods = {edit.method}
    work = [edit.method]
    while work:
        mid = work.pop()
        for n in sdg.nodes_of(mid):
            for v, k in sdg.succ.get(n.id, ()):
                if k == CALL_EDGE:
                    callee = sdg.nodes[v].method
                    if callee not in methods:
                        methods.add(callee)
                        work.append(callee)
    return {n.id for n in sdg.nodes.values()
            if n.method in methods and n.kind in ANNOTATABLE
            and attribution.get(n.line, Origin.BASE) is Origin.BASE}


def indirect_flow(sdg: Sdg, edit: MethodEdit, base: set[str]) -> list[FlowFinding]:
    """Common targets of both contributions among ``base`` nodes.

    Only meaningful when there is no direct flow; returns [] if there is one.
    """
    if direct_flow(sdg, edit):
        return []
    left = _line_flows(sdg, _nodes_on(sdg, edit.method, edit.left_lines), base)
    right = _line_flows(sdg, _nodes_on(sdg, edit.method, edit.right_lines), base)
    t_left = {t for reached in left.values() for t in reached}
    t_right = {t for reached in right.values() for t in reached}
    by_target_line: dict[int, list[str]] = {}
    for t in sorted(t_left & t_right):
        by_target_line.setdefault(sdg.nodes[t].line, []).append(t)
    findings = []
    for tline, tnodes in sorted(by_target_line.items()):
        ls = tuple(sorted(ln for ln, r in left.items() if any(t in r for t in tnodes)))
        rs = tuple(sorted(ln for ln, r in right.items() if any(t in r for t in tnodes)))
        path, kinds = next(left[ls[0]][t] for t in tnodes if t in left[ls[0]])
        findings.append(FlowFinding(Direction.INDIRECT_COMMON_TARGET, ls[0], rs[0], tline,
                                    ls, rs, path, kinds))
    return translate(findings)


def translate(findings: Iterable[FlowFinding]) -> list[FlowFinding]:
    """Collapse node-level findings to one per line pair, keeping the shortest witness."""
    best: dict[tuple, FlowFinding] = {}
    for f in findings:
        cur = best.get(f.key)
        if cur is None or len(f.witness) < len(cur.witness):
            best[f.key] = f
    return [best[k] for k in sorted(best)]


def analyze_method(sdg: Sdg, edit: MethodEdit, attribution: dict[int, Origin]) -> MethodResult:
    """Direct checks in both directions, then the common-target check if both came back empty."""
    try:
        findings = direct_flow(sdg, edit)
    except NoSourceOrSink:
        return MethodResult(edit.method, Status.NO_SOURCE_OR_SINK)
    if not findings:
        findings = indirect_flow(sdg, edit, base_nodes(sdg, edit, attribution))
    return MethodResult(edit.method, Status.FLOW_FOUND if findings else Status.NO_FLOW, findings)
