"""Build a small SDG by hand and see why a forward slice must match calls with returns."""
from mergeifc.lang import parse, resolve
from mergeifc.graph import AnalysisConfig, build_sdg
from mergeifc.ifc import forward_slice

SRC = """class A {
    int id(int x) {
        return x;
    }
    void m(int p, int q) {
        int a = id(p);
        int b = id(q);
    }
}
"""

if __name__ == "__main__":
    g = build_sdg(resolve(parse(SRC)), ["A.m"], AnalysisConfig())
    start = {n.id for n in g.nodes.values() if n.method == "A.m" and n.kind == "formal-in"
             and n.key == ("param", 0)}
    sliced = forward_slice(g, start)
    # naive reachability enters id() at line 6 and leaves at line 7 too
    seen, todo = set(start), list(start)
    while todo:
        for v, _ in g.succ.get(todo.pop(), ()):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    lines = lambda ids: sorted({g.nodes[n].line for n in ids if g.nodes[n].method == "A.m"})
    print("lines of m reached from p, call/return matched:", lines(sliced))
    print("lines of m reached from p, plain reachability: ", lines(seen))
