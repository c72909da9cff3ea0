"""Run the three showcase scenarios and print merged code, attribution and findings."""
from mergeifc import corpus_root
from mergeifc.graph import AnalysisConfig, build_sdg
from mergeifc.ifc import analyze_method
from mergeifc.merge import MergeScenario, Origin, merge_members

MARK = {Origin.LEFT: "L", Origin.RIGHT: "R", Origin.BASE: " "}


def show(name: str) -> None:
    out = merge_members(MergeScenario.from_dir(corpus_root() / name))
    print(f"== {name}")
    for i, text in enumerate(out.merged_text.rstrip("\n").split("\n"), 1):
        print(f"{i:3d} {MARK[out.attribution[i]]} {text}")
    sdg = build_sdg(out.resolved, [e.method for e in out.method_edits], AnalysisConfig())
    print(f"SDG: {len(sdg.nodes)} nodes, {len(sdg.edges)} edges")
    for e in out.method_edits:
        r = analyze_method(sdg, e, out.attribution)
        print(f"{r.method}: {r.status.value}")
        for f in r.findings:
            via = f" via line {f.target_line}" if f.target_line else ""
            print(f"  {f.direction.value}: {f.source_line} -> {f.sink_line}{via}  [{', '.join(f.witness_edges)}]")
    print()


if __name__ == "__main__":
    for name in ("generate_bill", "dominates", "outer_html"):
        show(name)
