import random

import pytest

from mergeifc import corpus_root
from mergeifc.errors import NoSourceOrSink
from mergeifc.graph import AnalysisConfig, build_sdg
from mergeifc.graph.sdg import CONTROL
from mergeifc.ifc import (
    Direction, FlowFinding, Status, analyze_method, annotate, base_nodes, direct_flow,
    forward_slice, indirect_flow, translate,
)
from mergeifc.merge import MergeScenario, MethodEdit, Origin, merge_members

from oracles import realizable_reach
from progen import mutate, random_program

L2R, R2L, IND = Direction.LEFT_TO_RIGHT, Direction.RIGHT_TO_LEFT, Direction.INDIRECT_COMMON_TARGET


def setup(name_or_scenario, config=AnalysisConfig()):
    sc = name_or_scenario
    if isinstance(sc, str):
        sc = MergeScenario.from_dir(corpus_root() / sc)
    out = merge_members(sc)
    g = build_sdg(out.resolved, [e.method for e in out.method_edits], config)
    return out, g


def lines_of(g, ids):
    return {g.nodes[n].line for n in ids}


def test_annotate_generate_bill_and_inversion():
    out, g = setup("generate_bill")
    (e,) = out.method_edits
    a = annotate(g, e, L2R)
    assert lines_of(g, a.sources) == {7, 8} and lines_of(g, a.sinks) == {11}
    b = annotate(g, e, R2L)
    assert (b.sources, b.sinks) == (a.sinks, a.sources)
    assert not (a.sources & a.sinks)


def test_annotate_comment_line_fails():
    out, g = setup("comment_only")
    (e,) = out.method_edits
    with pytest.raises(NoSourceOrSink):
        annotate(g, e, L2R)
    assert analyze_method(g, e, out.attribution).status is Status.NO_SOURCE_OR_SINK


def test_generate_bill_direct_flow():
    out, g = setup("generate_bill")
    fs = direct_flow(g, out.method_edits[0])
    assert fs and all(f.direction is L2R for f in fs)
    assert {f.sink_line for f in fs} == {11}
    assert {f.source_line for f in fs} <= {7, 8}


def test_dominates_flow_has_control_witness():
    out, g = setup("dominates")
    fs = direct_flow(g, out.method_edits[0])
    assert any(f.direction is L2R and f.sink_line == 16 and CONTROL in f.witness_edges for f in fs)


def test_outer_html_indirect_only():
    out, g = setup("outer_html")
    (e,) = out.method_edits
    assert direct_flow(g, e) == []
    fs = indirect_flow(g, e, base_nodes(g, e, out.attribution))
    assert 9 in {f.target_line for f in fs}
    f = next(f for f in fs if f.target_line == 9)
    assert f.left_lines == (5,) and f.right_lines == (7,)
    assert out.merged_text.split("\n")[8].strip() == "accum.append(html);"


def test_indirect_not_reported_when_direct_exists():
    out, g = setup("generate_bill")
    e = out.method_edits[0]
    assert indirect_flow(g, e, base_nodes(g, e, out.attribution)) == []


def test_disjoint_edits_have_no_flow():
    out, g = setup("no_flow")
    e = out.method_edits[0]
    assert direct_flow(g, e) == []
    assert indirect_flow(g, e, base_nodes(g, e, out.attribution)) == []


def test_overwrite_blindness():
    out, g = setup("overwrite")
    r = analyze_method(g, out.method_edits[0], out.attribution)
    assert r.status is Status.NO_FLOW and r.findings == []


def test_right_to_left_direction():
    out, g = setup("right_to_left")
    fs = direct_flow(g, out.method_edits[0])
    assert [f.direction for f in fs] == [R2L]


def test_translate_dedupes_and_sorts():
    a = FlowFinding(L2R, 5, 9, witness=("x", "y", "z"))
    b = FlowFinding(L2R, 5, 9, witness=("x", "z"))
    c = FlowFinding(R2L, 9, 5)
    d = FlowFinding(L2R, 4, 9)
    out = translate([c, a, b, d])
    assert [(f.direction, f.source_line, f.sink_line) for f in out] == \
        [(L2R, 4, 9), (L2R, 5, 9), (R2L, 9, 5)]
    assert out[1].witness == ("x", "z")
    assert translate([]) == []


def test_witness_endpoints_are_annotated_lines():
    out, g = setup("call_summary")
    e = out.method_edits[0]
    for f in direct_flow(g, e):
        assert g.nodes[f.witness[0]].line == f.source_line
        assert g.nodes[f.witness[-1]].line == f.sink_line
        assert f.source_line != f.sink_line
        assert len(f.witness_edges) == len(f.witness) - 1


def test_unknown_method_rejected():
    out, g = setup("generate_bill")
    with pytest.raises(ValueError):
        annotate(g, MethodEdit("Nope.x", frozenset({1}), frozenset({2})), L2R)


def _site_of(g):
    out = {}
    for n in g.nodes.values():
        if n.kind == "call":
            out[n.id] = n.id
        elif n.call_site is not None:
            out[n.id] = n.call_site
    return out


def _finding_set(results):
    return {(f.direction, f.source_line, f.sink_line, f.target_line)
            for r in results for f in r.findings}


def _random_scenarios(seed, count):
    rng = random.Random(seed)
    made = 0
    while made < count:
        base = random_program(rng)
        sc = MergeScenario(base, mutate(rng, base, 3), mutate(rng, base, 3))
        out = merge_members(sc)
        if out.conflicts or not out.method_edits:
            continue
        made += 1
        yield sc, out


def test_direction_soundness_against_path_oracle():
    for sc, out in _random_scenarios(31, 25):
        for cfg in (AnalysisConfig(), AnalysisConfig(exceptions=True)):
            g = build_sdg(out.resolved, [e.method for e in out.method_edits], cfg)
            site_of = _site_of(g)
            for e in out.method_edits:
                try:
                    a = annotate(g, e, L2R)
                except NoSourceOrSink:
                    continue
                fs = direct_flow(g, e)
                expect = any(realizable_reach(g.nodes, g.edges, site_of, {s}) & a.sinks
                             for s in a.sources)
                assert any(f.direction is L2R for f in fs) == expect


def test_config_monotonicity_of_findings():
    for sc, out in _random_scenarios(32, 25):
        res = {}
        for cid in ("instance-noexc", "instance-exc", "type-noexc", "type-exc"):
            g = build_sdg(out.resolved, [e.method for e in out.method_edits],
                          AnalysisConfig.from_id(cid))
            res[cid] = [analyze_method(g, e, out.attribution) for e in out.method_edits]
        direct = {k: {x for x in _finding_set(v) if x[0] is not IND} for k, v in res.items()}
        assert direct["instance-noexc"] <= direct["instance-exc"]
        assert direct["type-noexc"] <= direct["type-exc"]
        assert direct["instance-noexc"] <= direct["type-noexc"]
        assert direct["instance-exc"] <= direct["type-exc"]


def _swap(f):
    d = {L2R: R2L, R2L: L2R, IND: IND}[f.direction]
    if f.direction is IND:
        return (d, f.sink_line, f.source_line, f.target_line, f.right_lines, f.left_lines)
    return (d, f.source_line, f.sink_line, None, (), ())


def _key(f):
    return (f.direction, f.source_line, f.sink_line, f.target_line, f.left_lines, f.right_lines)


@pytest.mark.parametrize("name", ["generate_bill", "dominates", "outer_html", "right_to_left",
                                  "call_summary", "loop_carried"])
def test_swap_symmetry(name):
    sc = MergeScenario.from_dir(corpus_root() / name)
    out_a, g_a = setup(sc)
    out_b, g_b = setup(sc.swapped())
    fa = [f for e in out_a.method_edits for f in analyze_method(g_a, e, out_a.attribution).findings]
    fb = [f for e in out_b.method_edits for f in analyze_method(g_b, e, out_b.attribution).findings]
    assert {_swap(f) for f in fa} == {_key(f) for f in fb}


def test_forward_slice_is_a_superset_of_start():
    out, g = setup("outer_html")
    start = set(list(g.nodes)[:5])
    assert start <= forward_slice(g, start)


def test_base_nodes_cover_callees_but_skip_edited_lines():
    out, g = setup("outer_html")
    e = out.method_edits[0]
    nodes = base_nodes(g, e, out.attribution)
    methods = {g.nodes[n].method for n in nodes}
    assert {"Node.outerHtml", "Accum.append"} <= methods
    assert not any(out.attribution.get(g.nodes[n].line) is not Origin.BASE for n in nodes)
