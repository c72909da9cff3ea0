import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mergeifc.errors import ParseError, ResolveError
from mergeifc.lang import lint_one_statement_per_line, parse, pretty, resolve
from mergeifc.lang import ast as A

from progen import random_program


def test_minimal_program():
    p = parse("class A { int f; void m() { f = 1; } }")
    assert len(p.classes) == 1
    c = p.classes[0]
    assert [f.name for f in c.fields] == ["f"]
    (m,) = c.methods
    (s,) = m.body
    assert isinstance(s, A.Assign) and s.line == 1


def test_empty_unit():
    assert parse("").classes == ()


def test_unbalanced_brace_reports_line():
    with pytest.raises(ParseError) as exc:
        parse("class A {")
    assert exc.value.line == 1


def test_statement_lines_skip_comments_and_blanks():
    src = "class A {\n  int f;\n  // note\n\n  void m() {\n    /* a\n b */\n    f = 2;\n  }\n}\n"
    m = parse(src).classes[0].methods[0]
    assert m.body[0].line == 8
    assert m.line_span == range(5, 10)


def test_error_position_is_line_and_column():
    with pytest.raises(ParseError) as exc:
        parse("class A {\n  void m() {\n    f = ;\n  }\n}")
    assert (exc.value.line, exc.value.col) == (3, 9)


def test_unknown_character():
    with pytest.raises(ParseError):
        parse("class A { int f; void m() { f = 1 # 2; } }")


def test_hierarchy():
    rp = resolve(parse("class A { }\nclass B extends A { }"))
    assert rp.superclass == {"A": None, "B": "A"}
    assert rp.subclasses("A") == ["A", "B"]
    assert rp.is_subtype("B", "A") and not rp.is_subtype("A", "B")


def test_unknown_superclass():
    with pytest.raises(ResolveError) as exc:
        resolve(parse("class B extends C { }"))
    assert exc.value.symbol == "C"


def test_cyclic_inheritance():
    with pytest.raises(ResolveError) as exc:
        resolve(parse("class A extends B { }\nclass B extends A { }"))
    assert exc.value.symbol == "cycle"


@pytest.mark.parametrize("src,symbol", [
    ("class A { void m() { x = 1; } }", "x"),
    ("class A { void m(A a) { a.g = 1; } }", "g"),
    ("class A { void m(A a) { a.n(); } }", "n"),
    ("class A { Q q; }", "Q"),
    ("class A { int f; int f; }", "f"),
    ("class A { void m() { } void m() { } }", "m"),
    ("class A { void m(int p, int p) { } }", "p"),
    ("class A { void m() { return; int x = 1; } }", "unreachable"),
])
def test_resolve_errors_name_the_symbol(src, symbol):
    with pytest.raises(ResolveError) as exc:
        resolve(parse(src))
    assert exc.value.symbol == symbol


def test_wrong_arity():
    with pytest.raises(ResolveError):
        resolve(parse("class A { void n(int x) { } void m() { n(); } }"))


def test_static_types_and_virtual_dispatch():
    src = ("class A { int v() { return 1; } }\n"
           "class B extends A { int v() { return 2; } }\n"
           "class U { void m() { A a = new B(); int x = a.v(); } }")
    rp = resolve(parse(src))
    decl, call = rp.method("U.m").body
    assert rp.types[decl.init.eid] == "B"
    assert rp.call_targets[call.init.eid].mid == "A.v"
    assert rp.dispatch("B", "v").mid == "B.v"


def test_inherited_field_resolves_to_declaring_class():
    rp = resolve(parse("class A { int f; }\nclass B extends A { void m() { f = 1; } }"))
    (s,) = rp.method("B.m").body
    assert rp.field_refs[s.target.eid] == ("A", "f")


def test_lint_flags_two_statements_on_a_line():
    p = parse("class A { int f;\n void m() {\n f = 1; f = 2;\n f = 3;\n }\n}")
    assert lint_one_statement_per_line(p) == [("A.m", 3)]


def test_pretty_output_is_one_statement_per_line():
    p = parse("class A { int f; void m(int p) { if (p < 1) { f = 1; } else f = 2; while (f < p) f = f + 1; } }")
    q = parse(pretty(p))
    assert lint_one_statement_per_line(q) == []
    assert q == p


_atoms = st.sampled_from(["a", "b", "1", "0", "true", "null", "this", "this.f", "o.f", "n()", "o.n(a, 2)"])


def _combine(children):
    binop = st.sampled_from(["+", "-", "*", "/", "<", "==", "&&", "||"])
    return st.one_of(
        st.tuples(children, binop, children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(children, binop, children).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
        children.map(lambda c: f"!({c})"),
    )


_exprs = st.recursive(_atoms, _combine, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(_exprs)
def test_expression_round_trip(expr):
    p = parse(f"class A {{ void m() {{ int r = {expr}; }} }}")
    assert parse(pretty(p)) == p


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_program_round_trip(seed):
    p = parse(random_program(random.Random(seed)))
    text = pretty(p)
    q = parse(text)
    assert q == p
    assert pretty(q) == text
    assert lint_one_statement_per_line(q) == []
