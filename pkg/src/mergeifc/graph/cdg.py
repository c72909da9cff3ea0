"""Postdominators and control dependence (Ferrante-Ottenstein-Warren)."""
from __future__ import annotations

from collections import defaultdict

from .cfg import ENTRY, EXIT, Cfg


def _succ_map(nodes, edges):
    succ = defaultdict(set)
    for u, v in edges:
        succ[u].add(v)
    return {n: succ[n] for n in nodes}


def postdominators(nodes, edges, exit_node) -> dict:
    """Map each node to the set of nodes postdominating it (reflexive).

    Nodes that cannot reach ``exit_node`` are postdominated by every node.
    """
    succ = _succ_map(nodes, edges)
    every = set(nodes)
    pdom = {n: set(every) for n in nodes}
    pdom[exit_node] = {exit_node}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            if n == exit_node:
                continue
            new = set(every)
            for s in succ[n]:
                new &= pdom[s]
            if not succ[n]:
                new = set(every)
            new = new | {n}
            if new != pdom[n]:
                pdom[n] = new
                changed = True
    return pdom


def immediate_postdominators(pdom: dict) -> dict:
    ipdom = {}
    for n, ps in pdom.items():
        strict = ps - {n}
        # the strict postdominator closest to n is the one with the most postdominators
        ipdom[n] = max(strict, key=lambda p: len(pdom[p]), default=None)
    return ipdom


def control_dependence_pairs(nodes, edges, entry_node, exit_node) -> set[tuple]:
    """``(a, b)`` pairs with ``b`` control dependent on ``a``.

    The graph is augmented with ``entry -> exit`` so that statements outside
    any predicate come out dependent on the entry node.
    """
    edges = set(edges) | {(entry_node, exit_node)}
    pdom = postdominators(nodes, edges, exit_node)
    ipdom = immediate_postdominators(pdom)
    out = set()
    for a, b in edges:
        if b in pdom[a] and b != a:
            continue
        stop = ipdom[a]
        t = b
        while t is not None and t != stop:
            if t != exit_node:
                out.add((a, t))
            t = ipdom[t]
    return out


def control_dependence(cfg: Cfg) -> set[tuple[int, int]]:
    """Control-dependence pairs over every CFG edge, normal and exceptional."""
    return control_dependence_pairs(cfg.nodes, {(u, v) for u, v, _ in cfg.edges}, ENTRY, EXIT)
