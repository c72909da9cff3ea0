"""Brute-force reference implementations used as test oracles.

Each one applies a definition directly by enumerating paths, trading speed
for obviousness. They share no code with the analyses they check.
"""
from __future__ import annotations

import random
from collections import defaultdict, deque


# -- postdominance and control dependence -------------------------------------------

def _reaches_avoiding(succ, src, dst, avoid) -> bool:
    if src == avoid:
        return False
    seen, stack = {src}, [src]
    while stack:
        u = stack.pop()
        if u == dst:
            return True
        for v in succ[u]:
            if v != avoid and v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def postdominates(succ, exit_node, b, n) -> bool:
    """``b`` postdominates ``n``: every path from ``n`` to exit passes through ``b``."""
    return b == n or not _reaches_avoiding(succ, n, exit_node, b)


def control_dependence_bruteforce(nodes, edges, entry, exit_node) -> set[tuple]:
    """Pairs ``(a, b)`` such that some path a -> ... -> b has every node after ``a``
    postdominated by ``b``, while ``b`` does not strictly postdominate ``a``.

    The graph gets the usual ``entry -> exit`` edge first. Paths are simple
    apart from ending back at ``a`` when ``b == a``.
    """
    succ = defaultdict(set)
    for u, v in set(edges) | {(entry, exit_node)}:
        succ[u].add(v)
    pd = {(b, n): postdominates(succ, exit_node, b, n) for b in nodes for n in nodes}
    out = set()
    for a in nodes:
        for b in nodes:
            if b == exit_node or (b != a and pd[(b, a)]):
                continue
            # DFS over simple paths from a's successors, staying inside pdom(b)
            found = False
            stack = [(s, frozenset([s])) for s in succ[a] if pd[(b, s)]]
            while stack and not found:
                u, seen = stack.pop()
                if u == b:
                    found = True
                    break
                for v in succ[u]:
                    if pd[(b, v)] and (v not in seen) and (v != a or b == a):
                        stack.append((v, seen | {v}))
            if found:
                out.add((a, b))
    return out


# -- reaching definitions -------------------------------------------------------------

def reaching_bruteforce(nodes, edges, gens, uses, init, entry, unroll: int = 3) -> set[tuple]:
    """Def-use triples ``(def_site, use_node, var)`` by explicit path search.

    ``edges`` are ``(u, v, kind)``; leaving a node through an ``exception``
    edge skips that node's own definitions unless it is listed in
    ``complete_on_exception`` (passed via ``gens['__complete__']``). Each
    node may appear at most ``unroll`` times on a path.
    """
    complete = gens.get("__complete__", set())
    succ = defaultdict(list)
    for u, v, k in edges:
        succ[u].append((v, k))
    strong = {n: {var for var, is_strong in gens.get(n, ()) if is_strong} for n in nodes}
    defs = [(entry, var) for var in init]
    defs += [(n, var) for n in nodes if n in gens and n != "__complete__" for var, _ in gens[n]]
    out = set()
    for site, var in defs:
        # state: node, visit counts; the def holds on entering the node
        starts = [v for v, k in succ[site] if site == entry or k == "normal" or site in complete]
        stack = [(v, {v: 1}) for v in starts]
        while stack:
            u, counts = stack.pop()
            if var in uses.get(u, ()):
                out.add((site, u, var))
            for v, k in succ[u]:
                if var in strong[u] and (k == "normal" or u in complete):
                    continue
                if counts.get(v, 0) >= unroll:
                    continue
                c = dict(counts)
                c[v] = c.get(v, 0) + 1
                stack.append((v, c))
    return out


# -- realizable paths in an SDG ----------------------------------------------------------

INTRA = {"control-dep", "data-dep", "exception-control"}


def realizable_reach(nodes, edges, site_of, start) -> set:
    """Nodes reachable from ``start`` along call/return-balanced paths.

    Summary edges are ignored. ``site_of[n]`` names the call site owning an
    actual-in/out or call node. call and param-in push their site, param-out
    pops a matching site or, on an empty stack, returns to any caller.
    """
    succ = defaultdict(list)
    for u, v, k in edges:
        succ[u].append((v, k))
    seen = {(s, ()) for s in start}
    work = deque(seen)
    while work:
        u, stack = work.popleft()
        for v, k in succ[u]:
            if k in INTRA:
                nxt = stack
            elif k in ("call", "param-in"):
                nxt = stack + (site_of[u],)
            elif k == "param-out":
                site = site_of[v]
                if not stack:
                    nxt = ()
                elif stack[-1] == site:
                    nxt = stack[:-1]
                else:
                    continue
            else:
                continue
            if (v, nxt) not in seen:
                seen.add((v, nxt))
                work.append((v, nxt))
    return {n for n, _ in seen}


def random_sdg(rng: random.Random, max_nodes: int = 30, max_sites: int = 2):
    """A well-formed random SDG skeleton: procedures, formals, call sites, PDG edges.

    Returns ``(nodes, edges, site_of)`` where nodes map id -> (kind, proc).
    Calls only go from lower- to higher-numbered procedures, so there is no
    recursion. Summary edges are not included.
    """
    while True:
        nodes, edges, site_of = {}, set(), {}
        nprocs = rng.randint(1, 3)
        procs = []
        for p in range(nprocs):
            entry = f"p{p}:entry"
            nodes[entry] = ("entry", p)
            fins = [f"p{p}:fin{i}" for i in range(rng.randint(1, 2))]
            fouts = [f"p{p}:fout{i}" for i in range(rng.randint(1, 2))]
            stmts = [f"p{p}:s{i}" for i in range(rng.randint(1, 4))]
            for n in fins:
                nodes[n] = ("formal-in", p)
            for n in fouts:
                nodes[n] = ("formal-out", p)
            for n in stmts:
                nodes[n] = ("statement", p)
            for n in fins + fouts + stmts:
                if n in stmts and rng.random() < 0.3:
                    continue  # left for a random controlling statement
                edges.add((entry, n, "control-dep"))
            procs.append({"entry": entry, "fin": fins, "fout": fouts, "stmts": stmts,
                          "ain": [], "aout": []})
        nsites = rng.randint(0, max_sites) if nprocs > 1 else 0
        for c in range(nsites):
            caller = rng.randrange(0, nprocs - 1)
            callee = rng.randrange(caller + 1, nprocs)
            cp, ce = procs[caller], procs[callee]
            call = f"p{caller}:call{c}"
            nodes[call] = ("call", caller)
            site_of[call] = call
            edges.add((rng.choice([cp["entry"]] + cp["stmts"]), call, "control-dep"))
            edges.add((call, ce["entry"], "call"))
            for i, fi in enumerate(ce["fin"]):
                a = f"p{caller}:call{c}:ain{i}"
                nodes[a] = ("actual-in", caller)
                site_of[a] = call
                edges.add((call, a, "control-dep"))
                edges.add((a, fi, "param-in"))
                cp["ain"].append(a)
            for i, fo in enumerate(ce["fout"]):
                a = f"p{caller}:call{c}:aout{i}"
                nodes[a] = ("actual-out", caller)
                site_of[a] = call
                edges.add((call, a, "control-dep"))
                edges.add((fo, a, "param-out"))
                cp["aout"].append(a)
        if len(nodes) > max_nodes:
            continue
        for pr in procs:
            srcs = [pr["entry"]] + pr["fin"] + pr["stmts"] + pr["aout"]
            dsts = pr["stmts"] + pr["fout"] + pr["ain"]
            for _ in range(rng.randint(1, 2 * len(dsts))):
                u, v = rng.choice(srcs), rng.choice(dsts)
                if u != v:
                    kind = rng.choice(["data-dep", "data-dep", "control-dep", "exception-control"])
                    edges.add((u, v, kind))
        return nodes, edges, site_of
