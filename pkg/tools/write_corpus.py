"""Writes the bundled scenario corpus (base/left/right.mj per scenario)."""
from pathlib import Path
import textwrap

ROOT = Path(__file__).resolve().parents[1] / "src" / "mergeifc" / "corpus"

S = {}

S["generate_bill"] = dict(
base="""
class Bill {
    int pricesMean;
    void generateBill(Item item, int size) {
        int total = 0;
        while (!(item == null)) {
            total = total + item.price;
            item = item.next;
        }
    }
}
class Item {
    int price;
    Item next;
}
""",
left="""
class Bill {
    int pricesMean;
    void generateBill(Item item, int size) {
        int total = 0;
        while (!(item == null)) {
            total = total + item.price;
            if (100 < item.price)
                total = total - item.price / 10;
            item = item.next;
        }
    }
}
class Item {
    int price;
    Item next;
}
""",
right="""
class Bill {
    int pricesMean;
    void generateBill(Item item, int size) {
        int total = 0;
        while (!(item == null)) {
            total = total + item.price;
            item = item.next;
        }
        pricesMean = total / size;
    }
}
class Item {
    int price;
    Item next;
}
""")

S["dominates"] = dict(
base="""
class State {
    bool isBikeRenting;
    bool isCarParked;
    int weight;
    bool dominates(State other) {
        State thisState = this;
        if (!(thisState.isBikeRenting == other.isBikeRenting))
            return false;
        if (!(thisState.isCarParked == other.isCarParked))
            return false;
        int w = thisState.weight;
        int ow = other.weight;
        return thisState.calculation(w, ow);
    }
    bool calculation(int w, int ow) {
        return w < ow;
    }
}
""",
left="""
class State {
    bool isBikeRenting;
    bool isCarParked;
    bool isBikeParked;
    int weight;
    bool dominates(State other) {
        State thisState = this;
        if (!(thisState.isBikeRenting == other.isBikeRenting))
            return false;
        if (!(thisState.isCarParked == other.isCarParked))
            return false;
        if (!(thisState.isBikeParked == other.isBikeParked))
            return false;
        int w = thisState.weight;
        int ow = other.weight;
        return thisState.calculation(w, ow);
    }
    bool calculation(int w, int ow) {
        return w < ow;
    }
}
""",
right="""
class State {
    bool isBikeRenting;
    bool isCarParked;
    int weight;
    bool dominates(State other) {
        State thisState = this;
        if (!(thisState.isBikeRenting == other.isBikeRenting))
            return false;
        if (!(thisState.isCarParked == other.isCarParked))
            return false;
        int w = thisState.weight;
        int ow = other.weight;
        return thisState.updatedCalculation(w, ow);
    }
    bool calculation(int w, int ow) {
        return w < ow;
    }
    bool updatedCalculation(int w, int ow) {
        return w < ow + 1;
    }
}
""")

_ACCUM = """
class Accum {
    int text;
    int depth;
    Accum indented() {
        Accum a = new Accum();
        a.depth = depth + 1;
        a.text = text;
        return a;
    }
    void append(int v) {
        text = text + v;
    }
}
"""

def _outer(c3, c5):
    return f"""
class Node {{
    int tag;
    void outerHtml(Accum accum, bool a1, bool a2, bool b1, bool b2) {{
        int html = 0;
        if ({c3})
            html = tag;
        if ({c5})
            accum = accum.indented();
        accum.append(html);
    }}
}}""" + _ACCUM

S["outer_html"] = dict(base=_outer("a1", "b1"), left=_outer("a1 && a2", "b1"), right=_outer("a1", "b1 || b2"))

S["exception_only"] = dict(
base="""
class Counter {
    int count;
    int last;
    void record(Box box) {
        count = count + 1;
    }
}
class Box {
    int value;
}
""",
left="""
class Counter {
    int count;
    int last;
    void record(Box box) {
        int v = box.value;
        count = count + 1;
    }
}
class Box {
    int value;
}
""",
right="""
class Counter {
    int count;
    int last;
    void record(Box box) {
        count = count + 1;
        last = 7;
    }
}
class Box {
    int value;
}
""")

def _canvas(k_line, extra):
    return f"""
class Shape {{
    int area;
    void scale(int k) {{
    }}
}}
class Square extends Shape {{
    void scale(int k) {{
    }}
}}
class Circle extends Shape {{
    void scale(int k) {{
        area = k;
    }}
}}
class Canvas {{
    int out;
    void draw(int p) {{
        Shape s = new Square();
        {k_line}
        s.scale(k);{extra}
    }}
}}
"""

S["virtual_dispatch"] = dict(
    base=_canvas("int k = 1;", ""),
    left=_canvas("int k = p + 2;", ""),
    right=_canvas("int k = 1;", "\n        out = s.area;"),
)

S["identical_lines"] = dict(
base="""
class Acc {
    int a;
    int b;
    int c;
    void run(int p) {
        a = p;
        b = p;
        c = a + b;
    }
}
""",
left="""
class Acc {
    int a;
    int b;
    int c;
    void run(int p) {
        a = p;
        a = a + 1;
        b = p;
        b = b * 2;
        c = a + b;
    }
}
""",
right="""
class Acc {
    int a;
    int b;
    int c;
    void run(int p) {
        a = p;
        b = p;
        b = b * 2;
        c = a + b;
        c = c + 3;
    }
}
""")

S["comment_only"] = dict(
base="""
class Report {
    int total;
    void add(int x) {
        int y = x * 2;
        total = total + y;
    }
}
""",
left="""
class Report {
    int total;
    void add(int x) {
        // doubles the input before accumulating
        int y = x * 2;
        total = total + y;
    }
}
""",
right="""
class Report {
    int total;
    void add(int x) {
        int y = x * 2;
        total = total + y;
        total = total + 1;
    }
}
""")

def _calc(l, r):
    return f"""
class Calc {{
    int out;
    void compute(int p) {{
        int x = p;{l}
        int y = 0;{r}
        out = x;
    }}
}}
"""

S["overwrite"] = dict(
    base=_calc("", ""),
    left=_calc("\n        x = p + 1;", ""),
    right=_calc("", "\n        x = p * 2;"),
)

S["disjoint_additions"] = dict(
base="""
class Svc {
    int n;
    void m1() {
        n = 1;
    }
}
""",
left="""
class Svc {
    int n;
    void m1() {
        n = 1;
    }
    void m2() {
        n = 2;
    }
}
""",
right="""
class Svc {
    int n;
    void m1() {
        n = 1;
    }
    void m3() {
        n = 3;
    }
}
""")

S["overlapping_conflict"] = dict(
base="""
class Cfg {
    int level;
    void set(int v) {
        level = v;
    }
}
""",
left="""
class Cfg {
    int level;
    void set(int v) {
        level = v + 1;
    }
}
""",
right="""
class Cfg {
    int level;
    void set(int v) {
        level = v * 2;
    }
}
""")

def _pricing(l, r):
    return f"""
class Pricing {{
    int result;
    int twice(int v) {{
        return v * 2;
    }}
    void quote(int base, int rate) {{
        int k = base;{l}
        int d = this.twice(k);
        int e = rate;{r}
    }}
}}
"""

S["call_summary"] = dict(
    base=_pricing("", ""),
    left=_pricing("\n        k = k + rate;", ""),
    right=_pricing("", "\n        result = d + e;"),
)

def _ledger(l, r):
    return f"""
class Ledger {{
    int balance;
    int fee;
    void settle(int amount) {{
        int net = amount;{r}
        balance = balance + amount;{l}
    }}
}}
"""

S["right_to_left"] = dict(
    base=_ledger("", ""),
    left=_ledger("\n        fee = net / 10;", ""),
    right=_ledger("", "\n        net = amount - 5;"),
)

def _disjoint(l, r):
    return f"""
class Pair {{
    int a;
    int b;
    void update(int x, int y) {{
        a = x;{l}
        b = y;{r}
    }}
}}
"""

S["no_flow"] = dict(
    base=_disjoint("", ""),
    left=_disjoint("\n        a = a + 1;", ""),
    right=_disjoint("", "\n        b = b + 1;"),
)

S["formatting_only"] = dict(
base="""
class Fmt {
    int out;
    void run(int p) {
        int q = p + 1;
        int r = 0;
        out = r;
    }
}
""",
left="""
class Fmt {
    int out;
    void run(int p) {
          int q = p + 1;
        int r = 0;
        out = r;
    }
}
""",
right="""
class Fmt {
    int out;
    void run(int p) {
        int q = p + 1;
        int r = 0;
        out = r + q;
    }
}
""")

def _guard(l, r):
    return f"""
class Guard {{
    int state;
    void step(int p) {{
        int v = p;{l}
        state = 0;{r}
    }}
}}
class Failure {{
    int code;
}}
"""

S["throw_guard"] = dict(
    base=_guard("", ""),
    left=_guard("\n        if (v < 0)\n            throw new Failure();", ""),
    right=_guard("", "\n        state = state + 1;"),
)

def _tally(l, r):
    return f"""
class Tally {{
    int hits;
    void reset() {{
        hits = 0;
    }}
    void run(int n) {{
        int seen = n;{l}
        int z = 1;{r}
    }}
}}
"""

S["callee_field"] = dict(
    base=_tally("", ""),
    left=_tally("\n        this.reset();", ""),
    right=_tally("", "\n        z = hits + seen;"),
)

def _loop(l, r):
    return f"""
class Loop {{
    int acc;
    void spin(int n) {{
        int i = 0;
        int carry = 0;
        while (i < n) {{{l}
            i = i + 1;{r}
        }}
    }}
}}
"""

S["loop_carried"] = dict(
    base=_loop("", ""),
    left=_loop("\n            acc = acc + carry;", ""),
    right=_loop("", "\n            carry = i * 2;"),
)


def main():
    for name, parts in S.items():
        d = ROOT / name
        d.mkdir(parents=True, exist_ok=True)
        for k, text in parts.items():
            (d / f"{k}.mj").write_text(text.lstrip("\n"), encoding="utf-8")
    print(f"wrote {len(S)} scenarios to {ROOT}")


if __name__ == "__main__":
    main()
