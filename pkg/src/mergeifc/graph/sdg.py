"""Interprocedural System Dependence Graph construction.

One SDG is built per merged program, with every requested method as an entry
point. Fields are threaded through calls as extra parameters: a method gets a
formal-in per field it reads (transitively) and a formal-out per field it
writes (transitively).
"""
from __future__ import annotations

import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..errors import AnalysisTimeout, TooHeavy
from ..lang import ast as A
from ..lang.resolver import ResolvedProgram
from .callgraph import CallGraph, build_call_graph
from .cdg import control_dependence_pairs
from .cfg import ENTRY, EXIT, NORMAL, build_cfg
from .config import AnalysisConfig, Precision
from .dataflow import THIS, expr_uses, field_var, local_var, solve_reaching, stmt_defs_uses
from .pointsto import points_to

# node kinds
ENTRY_NODE = "entry"
STATEMENT = "statement"
PREDICATE = "predicate"
CALL = "call"
ACTUAL_IN = "actual-in"
ACTUAL_OUT = "actual-out"
FORMAL_IN = "formal-in"
FORMAL_OUT = "formal-out"

# edge kinds
CONTROL = "control-dep"
DATA = "data-dep"
CALL_EDGE = "call"
PARAM_IN = "param-in"
PARAM_OUT = "param-out"
SUMMARY = "summary"
EXC_CONTROL = "exception-control"

INTRA_KINDS = frozenset({CONTROL, DATA, EXC_CONTROL, SUMMARY})

RET = ("ret",)
THIS_KEY = ("this",)


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    method: str
    line: int
    call_site: Optional[str] = None  # owning call node, for actual-in/out
    key: Optional[tuple] = None  # parameter key, for actual/formal nodes

    def label(self) -> str:
        return f"{self.kind}@{self.line} {self.method}"


@dataclass
class Sdg:
    nodes: dict[str, Node] = field(default_factory=dict)
    edges: set[tuple[str, str, str]] = field(default_factory=set)
    entry_points: frozenset[str] = frozenset()
    entries: dict[str, str] = field(default_factory=dict)
    succ: dict = field(default_factory=lambda: defaultdict(set))
    pred: dict = field(default_factory=lambda: defaultdict(set))
    node_limit: Optional[int] = None
    edge_limit: Optional[int] = None
    call_graph: Optional[CallGraph] = None

    def add_node(self, node: Node) -> str:
        self.nodes[node.id] = node
        if self.node_limit is not None and len(self.nodes) > self.node_limit:
            raise TooHeavy("nodes", len(self.nodes), self.node_limit)
        return node.id

    def add_edge(self, src: str, dst: str, kind: str) -> bool:
        e = (src, dst, kind)
        if e in self.edges:
            return False
        self.edges.add(e)
        self.succ[src].add((dst, kind))
        self.pred[dst].add((src, kind))
        if self.edge_limit is not None and len(self.edges) > self.edge_limit:
            raise TooHeavy("edges", len(self.edges), self.edge_limit)
        return True

    def nodes_of(self, method: str) -> list[Node]:
        return [n for n in self.nodes.values() if n.method == method]

    def methods(self) -> set[str]:
        return {n.method for n in self.nodes.values()}

    def to_dot(self) -> str:
        out = ["digraph sdg {"]
        for nid in sorted(self.nodes):
            out.append(f'  "{nid}" [label="{self.nodes[nid].label()}"];')
        for s, d, k in sorted(self.edges):
            out.append(f'  "{s}" -> "{d}" [label="{k}"];')
        out.append("}")
        return "\n".join(out) + "\n"


class _Deadline:
    def __init__(self, at: Optional[float]):
        self.at = at
        self.ticks = 0

    def check(self):
        self.ticks += 1
        if self.at is not None and self.ticks % 256 == 0 and time.monotonic() > self.at:
            raise AnalysisTimeout("analysis exceeded its time limit")


def _key_sort(k):
    return tuple(str(x) for x in k)


class _Builder:
    def __init__(self, rp: ResolvedProgram, entry_points, config: AnalysisConfig, deadline):
        self.rp = rp
        self.config = config
        self.deadline = deadline
        self.sdg = Sdg(entry_points=frozenset(entry_points),
                       node_limit=config.node_limit, edge_limit=config.edge_limit)
        self._ordinals = defaultdict(int)
        pts = points_to(rp, entry_points) if config.precision is Precision.INSTANCE_BASED else None
        self.cg = build_call_graph(rp, config.precision, pts, entry_points)
        self.sdg.call_graph = self.cg

    def node(self, kind, method, line, call_site=None, key=None) -> str:
        o = self._ordinals[(method, kind, line)]
        self._ordinals[(method, kind, line)] += 1
        nid = f"{method}:{kind}@{line}#{o}"
        return self.sdg.add_node(Node(nid, kind, method, line, call_site, key))

    def edge(self, src, dst, kind):
        self.deadline.check()
        self.sdg.add_edge(src, dst, kind)

    # -- program-level facts --

    def reachable(self) -> list[str]:
        seen = set(self.sdg.entry_points)
        work = deque(sorted(seen))
        while work:
            mid = work.popleft()
            for t in sorted(self.cg.callees(mid)):
                if t not in seen:
                    seen.add(t)
                    work.append(t)
        order = [m.mid for m in self.rp.program.methods()]
        return [mid for mid in order if mid in seen]

    def field_effects(self, methods):
        reads = {mid: set() for mid in methods}
        writes = {mid: set() for mid in methods}
        for mid in methods:
            for s in A.walk_stmts(self.rp.method(mid).body):
                defs, uses = stmt_defs_uses(s, self.rp)
                reads[mid] |= {v for v in uses if v[0] == "field"}
                writes[mid] |= {v for v, _ in defs if v[0] == "field"}
        changed = True
        while changed:
            changed = False
            for mid in methods:
                for t in self.cg.callees(mid):
                    if t in reads:
                        if not reads[t] <= reads[mid] or not writes[t] <= writes[mid]:
                            reads[mid] |= reads[t]
                            writes[mid] |= writes[t]
                            changed = True
        return reads, writes

    # -- construction --

    def build(self) -> Sdg:
        methods = self.reachable()
        self.reads, self.writes = self.field_effects(methods)
        self.formal_in: dict[str, dict] = {}
        self.formal_out: dict[str, dict] = {}
        self.calls: list[tuple[str, int, dict, dict]] = []  # call node, eid, actual-ins, actual-outs
        for mid in methods:
            self.method(self.rp.method(mid))
        for call_id, eid, ains, aouts in self.calls:
            for t in sorted(self.cg.targets[eid]):
                if t not in self.sdg.entries:
                    continue
                self.edge(call_id, self.sdg.entries[t], CALL_EDGE)
                for k, a in ains.items():
                    if k in self.formal_in[t]:
                        self.edge(a, self.formal_in[t][k], PARAM_IN)
                for k, a in aouts.items():
                    if k in self.formal_out[t]:
                        self.edge(self.formal_out[t][k], a, PARAM_OUT)
        summary_edges(self.sdg, self.deadline)
        return self.sdg

    def method(self, m: A.MethodDecl):
        mid, hl = m.mid, m.first_line
        entry = self.node(ENTRY_NODE, mid, hl)
        self.sdg.entries[mid] = entry
        fin = {THIS_KEY: self.node(FORMAL_IN, mid, hl, key=THIS_KEY)}
        for i, _ in enumerate(m.params):
            fin[("param", i)] = self.node(FORMAL_IN, mid, hl, key=("param", i))
        for f in sorted(self.reads[mid], key=_key_sort):
            fin[f] = self.node(FORMAL_IN, mid, hl, key=f)
        fout = {}
        if m.ret is not None:
            fout[RET] = self.node(FORMAL_OUT, mid, hl, key=RET)
        for f in sorted(self.writes[mid], key=_key_sort):
            fout[f] = self.node(FORMAL_OUT, mid, hl, key=f)
        self.formal_in[mid], self.formal_out[mid] = fin, fout
        for n in list(fin.values()) + list(fout.values()):
            self.edge(entry, n, CONTROL)

        cfg = build_cfg(m, self.config)
        stmt_node = {}
        gens: dict[int, list] = defaultdict(list)
        uses: list[tuple[int, tuple, str]] = []  # cfg node, var, consumer node
        calls_in = defaultdict(list)
        for n in cfg.nodes:
            s = cfg.stmts[n]
            if s is None:
                continue
            kind = PREDICATE if isinstance(s, (A.If, A.While)) else STATEMENT
            stmt_node[n] = self.node(kind, mid, s.line)
            self.statement(m, n, s, stmt_node[n], gens, uses, calls_in[n], fout)

        # control dependence: structural edges from the normal-flow CFG,
        # plus exception-induced ones when exceptional edges exist
        def sdg_src(a):
            return entry if a == ENTRY else stmt_node[a]

        # a throw terminates the method whether or not exceptions are modelled,
        # so its edge to EXIT is structural in both configurations
        normal = {(u, v) for u, v, k in cfg.edges
                  if k == NORMAL or isinstance(cfg.stmts[u], A.Throw)}
        structural = control_dependence_pairs(cfg.nodes, normal, ENTRY, EXIT)
        full = control_dependence_pairs(cfg.nodes, {(u, v) for u, v, _ in cfg.edges}, ENTRY, EXIT)
        cd = [(a, b, CONTROL) for a, b in structural]
        cd += [(a, b, EXC_CONTROL) for a, b in full - structural]
        for a, b, kind in sorted(cd):
            self.edge(sdg_src(a), stmt_node[b], kind)
            for c in calls_in[b]:
                self.edge(sdg_src(a), c, kind)

        # data dependence
        init = {(THIS, fin[THIS_KEY])}
        init |= {(local_var(p.name), fin[("param", i)]) for i, p in enumerate(m.params)}
        init |= {(f, fin[f]) for f in fin if f[0] == "field"}
        IN = solve_reaching(cfg, dict(gens), frozenset(init))
        for n, var, consumer in uses:
            for v, site in sorted(IN[n]):
                if v == var:
                    self.edge(site, consumer, DATA)
        for f, node in fout.items():
            if f[0] == "field":
                for v, site in sorted(IN[EXIT]):
                    if v == f:
                        self.edge(site, node, DATA)

    def statement(self, m, n, s, snode, gens, uses, calls_here, fout):
        """Create call-site nodes for ``s`` and record its defs and uses.

        Every use is attributed to the node consuming it: the statement node
        itself, or the actual-in of the call argument it feeds.
        """
        rp = self.rp
        line = s.line

        def visit(e, consumer):
            if isinstance(e, A.Call):
                call(e, consumer)
            elif isinstance(e, A.FieldRead):
                uses.append((n, field_var(rp.field_refs[e.eid]), consumer))
                visit(e.receiver, consumer)
            elif isinstance(e, A.Binary):
                visit(e.left, consumer)
                visit(e.right, consumer)
            elif isinstance(e, A.Unary):
                visit(e.operand, consumer)
            else:
                for v in expr_uses(e, rp):
                    uses.append((n, v, consumer))

        def call(e, consumer):
            c = self.node(CALL, m.mid, line)
            calls_here.append(c)
            targets = sorted(self.cg.targets[e.eid])
            ains = {THIS_KEY: self.node(ACTUAL_IN, m.mid, line, c, THIS_KEY)}
            if e.receiver is None:
                uses.append((n, THIS, ains[THIS_KEY]))
            else:
                visit(e.receiver, ains[THIS_KEY])
            for i, a in enumerate(e.args):
                ains[("param", i)] = self.node(ACTUAL_IN, m.mid, line, c, ("param", i))
                visit(a, ains[("param", i)])
            reads = set().union(set(), *(self.reads[t] for t in targets))
            writes = set().union(set(), *(self.writes[t] for t in targets))
            for f in sorted(reads, key=_key_sort):
                ains[f] = self.node(ACTUAL_IN, m.mid, line, c, f)
                uses.append((n, f, ains[f]))
            aouts = {}
            if any(rp.method(t).ret is not None for t in targets):
                aouts[RET] = self.node(ACTUAL_OUT, m.mid, line, c, RET)
            for f in sorted(writes, key=_key_sort):
                aouts[f] = self.node(ACTUAL_OUT, m.mid, line, c, f)
                gens[n].append((f, aouts[f], False))
            for node in list(ains.values()) + list(aouts.values()):
                self.edge(c, node, CONTROL)
            if RET in aouts:
                self.edge(aouts[RET], consumer, DATA)
            self.calls.append((c, e.eid, ains, aouts))

        for e in A.stmt_exprs(s):
            visit(e, snode)
        defs, _ = stmt_defs_uses(s, rp)
        for var, strong in defs:
            gens[n].append((var, snode, strong))
        if isinstance(s, A.Assign) and isinstance(s.target, A.Name) and s.target.eid in rp.field_refs:
            uses.append((n, THIS, snode))
        if isinstance(s, A.Return) and s.value is not None and RET in fout:
            self.edge(snode, fout[RET], DATA)


def build_sdg(rp: ResolvedProgram, entry_points: Iterable[str], config: AnalysisConfig = AnalysisConfig(),
              deadline: Optional[float] = None) -> Sdg:
    """Build one SDG covering every method reachable from ``entry_points``.

    Raises :class:`TooHeavy` as soon as the node or edge limit is exceeded
    and :class:`AnalysisTimeout` once ``deadline`` (a ``time.monotonic``
    value) has passed.
    """
    entry_points = list(entry_points)
    if not entry_points:
        raise ValueError("at least one entry point is required")
    return _Builder(rp, entry_points, config, _Deadline(deadline)).build()


def summary_edges(sdg: Sdg, deadline=None) -> Sdg:
    """Add actual-in -> actual-out summary edges (Horwitz-Reps-Binkley worklist).

    A summary edge is added at a call site when the callee's matching
    formal-in reaches its formal-out along same-level paths, which may
    themselves use summary edges of nested calls.
    """
    deadline = deadline if isinstance(deadline, _Deadline) else _Deadline(deadline)
    nodes = sdg.nodes
    path = set()
    by_src = defaultdict(set)
    work = deque()

    def add(v, w):
        if (v, w) not in path:
            path.add((v, w))
            by_src[v].add(w)
            work.append((v, w))

    for nid in sorted(nodes):
        if nodes[nid].kind == FORMAL_OUT:
            add(nid, nid)
    while work:
        deadline.check()
        v, w = work.popleft()
        if nodes[v].kind == FORMAL_IN:
            for x, k in sorted(sdg.pred[v]):
                if k != PARAM_IN:
                    continue
                site = nodes[x].call_site
                for y, k2 in sorted(sdg.succ[w]):
                    if k2 != PARAM_OUT or nodes[y].call_site != site:
                        continue
                    if sdg.add_edge(x, y, SUMMARY):
                        for w2 in sorted(by_src[y]):
                            add(x, w2)
        else:
            for u, k in sorted(sdg.pred[v]):
                if k in INTRA_KINDS:
                    add(u, w)
    return sdg
