"""Reaching definitions over a method CFG.

Definitions are ``(var, site)`` pairs; a variable is a hashable key such as
``("local", "x")`` or ``("field", "Item", "price")``. Only locals are killed
by redefinition: field updates are weak. An exceptional edge carries the
facts holding *before* its source statement, since the statement's own
effect does not happen when it throws; an explicit ``throw`` is the exception,
since its operands are fully evaluated first.
"""
from __future__ import annotations

from collections import defaultdict, deque

from ..lang import ast as A
from ..lang.resolver import ResolvedProgram
from .cfg import ENTRY, EXCEPTION, Cfg


def solve_reaching(cfg: Cfg, gens: dict, init=frozenset()) -> dict:
    """Return IN sets per CFG node.

    ``gens[n]`` is a list of ``(var, site, strong)``; a strong def kills all
    other reaching defs of ``var``. ``init`` holds the facts at ENTRY's exit.
    """
    succ = defaultdict(list)
    for u, v, k in cfg.edges:
        succ[u].append((v, k))
    nodes = cfg.nodes
    IN = {n: set() for n in nodes}
    # an explicit throw runs to completion before leaving, so its edge carries OUT
    throws = {n: isinstance(cfg.stmts[n], A.Throw) for n in nodes}
    OUT = {n: set() for n in nodes}

    def transfer(n):
        if n == ENTRY:
            return set(init)
        facts = set(IN[n])
        for var, site, strong in gens.get(n, ()):
            if strong:
                facts = {d for d in facts if d[0] != var}
        for var, site, strong in gens.get(n, ()):
            facts.add((var, site))
        return facts

    work = deque(nodes)
    queued = set(nodes)
    while work:
        n = work.popleft()
        queued.discard(n)
        OUT[n] = transfer(n)
        for v, k in succ[n]:
            flow = IN[n] if k == EXCEPTION and not throws[n] else OUT[n]
            if not flow <= IN[v]:
                IN[v] |= flow
                if v not in queued:
                    work.append(v)
                    queued.add(v)
    return IN


def local_var(name: str):
    return ("local", name)


def field_var(key):
    return ("field",) + tuple(key)


THIS = local_var("this")


def expr_uses(e, rp: ResolvedProgram) -> list:
    """Variables read by ``e`` (calls contribute only their receiver and arguments)."""
    out = []
    for x in A.sub_exprs(e):
        if isinstance(x, A.Name):
            if x.eid in rp.field_refs:
                out += [THIS, field_var(rp.field_refs[x.eid])]
            else:
                out.append(local_var(x.name))
        elif isinstance(x, A.FieldRead):
            out.append(field_var(rp.field_refs[x.eid]))
        elif isinstance(x, A.This):
            out.append(THIS)
        elif isinstance(x, A.Call) and x.receiver is None:
            out.append(THIS)
    return out


def stmt_defs_uses(s, rp: ResolvedProgram):
    """``(defs, uses)`` of statement ``s`` ignoring callee effects; defs are ``(var, strong)``."""
    defs, uses = [], []
    for e in A.stmt_exprs(s):
        uses += expr_uses(e, rp)
    if isinstance(s, A.LocalDecl):
        defs.append((local_var(s.name), True))
    elif isinstance(s, A.Assign):
        t = s.target
        if isinstance(t, A.Name) and t.eid not in rp.field_refs:
            defs.append((local_var(t.name), True))
        else:
            defs.append((field_var(rp.field_refs[t.eid]), False))
            if isinstance(t, A.Name):
                uses.append(THIS)
    return defs, uses


def reaching_definitions(cfg: Cfg, rp: ResolvedProgram) -> set[tuple]:
    """Def-use edges ``(def_node, use_node, var)`` between CFG nodes of one method.

    Parameters, ``this`` and fields are defined at ENTRY.
    """
    m = rp.method(cfg.method)
    gens, uses = {}, {}
    for n, s in cfg.stmts.items():
        if s is None:
            continue
        d, u = stmt_defs_uses(s, rp)
        gens[n] = [(var, n, strong) for var, strong in d]
        uses[n] = u
    init = {(local_var(p.name), ENTRY) for p in m.params} | {(THIS, ENTRY)}
    for ulist in uses.values():
        init |= {(v, ENTRY) for v in ulist if v[0] == "field"}
    IN = solve_reaching(cfg, gens, frozenset(init))
    out = set()
    for n, ulist in uses.items():
        for var in ulist:
            out |= {(site, n, var) for v, site in IN[n] if v == var}
    return out
