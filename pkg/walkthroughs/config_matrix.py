"""Run the bundled corpus under all four analysis configs and compare them."""
from mergeifc import corpus_root
from mergeifc.harness import compare_configs, format_comparison, run_corpus

if __name__ == "__main__":
    res = run_corpus(corpus_root(), "full", jobs=4)
    rows = {}
    for r in res.reports:
        rows.setdefault(r.scenario_id, {})[r.config_id] = r
    cids = ("instance-noexc", "instance-exc", "type-noexc", "type-exc")
    print("scenario".ljust(22) + "".join(c.rjust(19) for c in cids))
    for sid, by in rows.items():
        cells = []
        for c in cids:
            r = by[c]
            cells.append(f"{r.direct_flow_count}/{r.indirect_count}" if r.annotatable
                         else (r.failure_reason if r.failure_reason != "NONE" else "-"))
        print(sid.ljust(22) + "".join(x.rjust(19) for x in cells))
    print("\ncells are direct/indirect finding counts\n")
    print(format_comparison(compare_configs(res.reports)), end="")
