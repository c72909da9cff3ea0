"""Scenario and corpus runner: merge, build the SDG, run the flow checks, report.

Every scenario/config pair becomes one CSV row. Rows are sorted by
``(scenario_id, config_id)`` before writing, so output bytes do not depend on
worker count or completion order.
"""
from __future__ import annotations

import csv
import difflib
import io
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .errors import AnalysisTimeout, MJError, ParseError, ResolveError, SchemaError, TooHeavy
from .graph.config import AnalysisConfig
from .graph.sdg import build_sdg
from .ifc import Status, analyze_method
from .lang import lint_one_statement_per_line, tokenize
from .merge import MergeOutcome, MergeScenario, Origin, _lines, _mapping, _norm, merge_members

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "scenario_id", "config_id", "merged_ok", "conflict_count", "same_method_count",
    "sdg_created", "failure_reason", "nodes", "edges", "direct_flow_found",
    "direct_flow_count", "indirect_found", "indirect_count", "elapsed_ms", "flags",
]
FAILURE_REASONS = (
    "NONE", "TOO_HEAVY_NODES", "TOO_HEAVY_EDGES", "NO_SOURCE_OR_SINK", "PARSE_ERROR",
    "RESOLVE_ERROR", "TIMEOUT", "INTERNAL_ERROR",
)
MATRICES = {
    "default": ("instance-noexc",),
    "full": ("instance-noexc", "instance-exc", "type-noexc", "type-exc"),
}
DEFAULT_TIME_LIMIT = 60.0

FORMATTING_SUSPECT = "FORMATTING_SUSPECT"
MULTI_STATEMENT_LINE = "MULTI_STATEMENT_LINE"


@dataclass
class ScenarioReport:
    scenario_id: str
    config_id: str
    merged_ok: bool = False
    conflict_count: int = 0
    same_method_count: int = 0
    sdg_created: bool = False
    failure_reason: str = "NONE"
    nodes: Optional[int] = None
    edges: Optional[int] = None
    direct_flow_found: Optional[bool] = None
    direct_flow_count: Optional[int] = None
    indirect_found: Optional[bool] = None
    indirect_count: Optional[int] = None
    elapsed_ms: Optional[int] = None
    flags: tuple[str, ...] = ()

    @property
    def annotatable(self) -> bool:
        return self.sdg_created and self.failure_reason == "NONE"

    def row(self) -> list[str]:
        out = []
        for name in CSV_COLUMNS:
            v = getattr(self, name)
            if v is None:
                out.append("")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            elif name == "flags":
                out.append(";".join(v))
            else:
                out.append(str(v))
        return out

    @classmethod
    def from_row(cls, row: dict) -> "ScenarioReport":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        try:
            for name in CSV_COLUMNS:
                raw = row[name]
                t = types[name]
                if name == "flags":
                    kw[name] = tuple(x for x in raw.split(";") if x)
                elif "bool" in t:
                    if raw == "" and "Optional" in t:
                        kw[name] = None
                    elif raw in ("true", "false"):
                        kw[name] = raw == "true"
                    else:
                        raise ValueError(f"{name}: expected true/false, got {raw!r}")
                elif "int" in t:
                    kw[name] = None if raw == "" and "Optional" in t else int(raw)
                else:
                    kw[name] = raw
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad row {row!r}: {exc}") from exc
        if kw["failure_reason"] not in FAILURE_REASONS:
            raise SchemaError(f"unknown failure_reason {kw['failure_reason']!r}")
        return cls(**kw)


@dataclass
class ScenarioResult:
    report: ScenarioReport
    detail: dict = field(default_factory=dict)


# -- single scenario -------------------------------------------------------------

def _line_tokens(text: str) -> tuple[str, ...]:
    try:
        return tuple(t.text for t in tokenize(text) if t.kind != "eof")
    except ParseError:
        return ()


def formatting_suspects(scenario: MergeScenario, outcome: MergeOutcome) -> list[int]:
    """Attributed lines of edited methods whose tokens equal a base line they replaced.

    A side's line counts as replacing the base lines of the diff hunk it sits
    in; pure insertions never qualify.
    """
    merged = _lines(outcome.merged_text)
    base = _lines(scenario.base)
    edited = set().union(set(), *(e.left_lines | e.right_lines for e in outcome.method_edits))
    out = set()
    for side_text, origin in ((scenario.left, Origin.LEFT), (scenario.right, Origin.RIGHT)):
        side = _lines(side_text)
        replaced = {}
        sm = difflib.SequenceMatcher(None, _norm(base), _norm(side), autojunk=False)
        for tag, i1, i2, j1, j2 in sm.get_opcodes():
            if tag == "replace":
                toks = {_line_tokens(b) for b in base[i1:i2]} - {()}
                replaced.update((j, toks) for j in range(j1, j2))
        to_side = _mapping(merged, side)
        for ln in edited:
            j = to_side.get(ln - 1)
            if outcome.attribution.get(ln) is origin and j in replaced \
                    and _line_tokens(merged[ln - 1]) in replaced[j]:
                out.add(ln)
    return sorted(out)


def _failure(exc: BaseException) -> str:
    if isinstance(exc, TooHeavy):
        return f"TOO_HEAVY_{exc.kind.upper()}"
    if isinstance(exc, ParseError):
        return "PARSE_ERROR"
    if isinstance(exc, ResolveError):
        return "RESOLVE_ERROR"
    if isinstance(exc, AnalysisTimeout):
        return "TIMEOUT"
    return "INTERNAL_ERROR"


def analyze_scenario(path, config: AnalysisConfig = AnalysisConfig(), *,
                     time_limit: Optional[float] = DEFAULT_TIME_LIMIT, timings: bool = False,
                     texts: Optional[tuple[str, str, str]] = None) -> ScenarioResult:
    """Run merge, same-method detection, SDG construction and flow checks for one scenario.

    Failures are recorded in the report rather than raised. ``elapsed_ms`` is
    filled only when ``timings`` is set, keeping reports reproducible byte for
    byte by default. ``texts`` supplies (base, left, right) sources directly,
    in which case ``path`` only names the scenario.
    """
    path = Path(path)
    t0 = time.monotonic()
    deadline = t0 + time_limit if time_limit else None
    rep = ScenarioReport(path.name, config.config_id)
    detail: dict = {"scenario_id": rep.scenario_id, "config_id": rep.config_id}
    try:
        _run(path, config, deadline, rep, detail, texts)
    except MJError as exc:
        rep.failure_reason = _failure(exc)
        detail["error"] = str(exc)
        if not rep.sdg_created:
            rep.nodes = rep.edges = None
    except RecursionError as exc:
        rep.failure_reason = "INTERNAL_ERROR"
        detail["error"] = f"{type(exc).__name__}: {exc}"
    if not rep.annotatable:
        rep.direct_flow_found = rep.direct_flow_count = None
        rep.indirect_found = rep.indirect_count = None
    if timings:
        rep.elapsed_ms = int(round((time.monotonic() - t0) * 1000))
        detail["elapsed_ms"] = rep.elapsed_ms
    detail["report"] = dict(zip(CSV_COLUMNS, rep.row()))
    return ScenarioResult(rep, detail)


def _run(path, config, deadline, rep, detail, texts):
    if texts is None:
        scenario = MergeScenario.from_dir(path)
    else:
        scenario = MergeScenario(*texts, name=path.name)
    outcome = merge_members(scenario)
    rep.merged_ok = True
    rep.conflict_count = len(outcome.conflicts)
    detail["merged_text"] = outcome.merged_text
    detail["conflicts"] = [{"where": w, "hunk": h.describe()} for w, h in outcome.conflicts]
    detail["notes"] = list(outcome.notes)
    if outcome.conflicts:
        return
    detail["method_edits"] = [
        {"method": e.method, "left_lines": sorted(e.left_lines), "right_lines": sorted(e.right_lines)}
        for e in outcome.method_edits]
    detail["dropped"] = [{"method": m, "reason": r} for m, r in outcome.dropped]
    detail["attribution"] = {str(k): v.value for k, v in sorted(outcome.attribution.items())
                             if v is not Origin.BASE}
    rep.same_method_count = len(outcome.method_edits)
    flags = set()
    if formatting_suspects(scenario, outcome):
        flags.add(FORMATTING_SUSPECT)
    if lint_one_statement_per_line(outcome.program):
        flags.add(MULTI_STATEMENT_LINE)
    rep.flags = tuple(sorted(flags))
    if not outcome.method_edits:
        return

    sdg = build_sdg(outcome.resolved, [e.method for e in outcome.method_edits], config, deadline)
    rep.sdg_created = True
    rep.nodes, rep.edges = len(sdg.nodes), len(sdg.edges)
    detail["sdg"] = sdg
    results = []
    for e in outcome.method_edits:
        if deadline is not None and time.monotonic() > deadline:
            raise AnalysisTimeout("flow analysis exceeded its time limit")
        results.append(analyze_method(sdg, e, outcome.attribution))
    detail["methods"] = [
        {"method": r.method, "status": r.status.value, "counts": r.counts,
         "findings": [f.as_dict() for f in r.findings]}
        for r in results]
    ok = [r for r in results if r.status is not Status.NO_SOURCE_OR_SINK]
    if not ok:
        rep.failure_reason = "NO_SOURCE_OR_SINK"
        return
    rep.direct_flow_count = sum(len(r.direct) for r in ok)
    rep.indirect_count = sum(len(r.indirect) for r in ok)
    rep.direct_flow_found = rep.direct_flow_count > 0
    rep.indirect_found = rep.indirect_count > 0


def detail_json(detail: dict) -> str:
    """Serialize a scenario detail dict (the in-memory SDG is left out)."""
    return json.dumps({k: v for k, v in detail.items() if k != "sdg"}, indent=2, sort_keys=True) + "\n"


# -- corpus ------------------------------------------------------------------------

def scenario_dirs(root) -> list[Path]:
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} is not a directory")
    return sorted((p for p in root.iterdir() if (p / "base.mj").is_file()), key=lambda p: p.name)


def resolve_matrix(matrix: Union[str, Iterable[str]]) -> tuple[str, ...]:
    ids = MATRICES[matrix] if isinstance(matrix, str) else tuple(matrix)
    for cid in ids:
        AnalysisConfig.from_id(cid)
    return ids


def _task(args) -> ScenarioResult:
    path, config, time_limit, timings = args
    try:
        res = analyze_scenario(path, config, time_limit=time_limit, timings=timings)
    except OSError as exc:
        # unreadable scenario: keep the row, the run goes on
        rep = ScenarioReport(Path(path).name, config.config_id, failure_reason="INTERNAL_ERROR")
        res = ScenarioResult(rep, {"error": f"{type(exc).__name__}: {exc}"})
    res.detail.pop("sdg", None)
    return res


@dataclass
class CorpusResult:
    results: list[ScenarioResult]
    summary: dict

    @property
    def reports(self) -> list[ScenarioReport]:
        return [r.report for r in self.results]


def run_corpus(root, matrix: Union[str, Iterable[str]] = "default", *, jobs: int = 1,
               overrides: Optional[dict[str, dict]] = None,
               time_limit: Optional[float] = DEFAULT_TIME_LIMIT, timings: bool = False,
               **config_kw) -> CorpusResult:
    """Analyze every scenario directory under ``root`` for every config in ``matrix``.

    ``config_kw`` (node_limit, edge_limit) applies to all configs and
    ``overrides`` maps a scenario id to extra config fields for that scenario.
    """
    overrides = overrides or {}
    tasks = []
    for p in scenario_dirs(root):
        for cid in resolve_matrix(matrix):
            cfg = AnalysisConfig.from_id(cid, **{**config_kw, **overrides.get(p.name, {})})
            tasks.append((p, cfg, time_limit, timings))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    results.sort(key=lambda r: (r.report.scenario_id, r.report.config_id))
    return CorpusResult(results, summarize([r.report for r in results]))


def write_csv(reports: Iterable[ScenarioReport], out=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in sorted(reports, key=lambda r: (r.scenario_id, r.config_id)):
        w.writerow(r.row())
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def read_csv(source) -> list[ScenarioReport]:
    """Parse a report CSV from a path or from its text; raises SchemaError if malformed."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        source = Path(source).read_text(encoding="utf-8")
    reader = csv.DictReader(io.StringIO(source))
    if reader.fieldnames != CSV_COLUMNS:
        raise SchemaError(f"unexpected header {reader.fieldnames!r}")
    rows = []
    for row in reader:
        if None in row or len(row) != len(CSV_COLUMNS):
            raise SchemaError(f"wrong number of cells in row {row!r}")
        rows.append(ScenarioReport.from_row(row))
    return rows


# -- summaries -----------------------------------------------------------------------

@dataclass
class CorpusSummary:
    config_id: str
    scenarios: int = 0
    attempted: int = 0
    created: int = 0
    annotatable: int = 0
    creation_rate: float = 0.0
    direct_frequency: float = 0.0
    indirect_only_frequency: float = 0.0
    nodes_quartiles: Optional[list[float]] = None
    edges_quartiles: Optional[list[float]] = None


def _quartiles(xs):
    if not xs:
        return None
    return [float(q) for q in np.percentile(np.asarray(xs, dtype=float), [25, 50, 75])]


def summarize(reports: Iterable[ScenarioReport]) -> dict[str, dict]:
    """Per-config rates. Flow frequencies count only scenarios whose SDG was built and annotated."""
    reports = sorted(reports, key=lambda r: (r.config_id, r.scenario_id))
    out = {}
    for cid, group in itertools.groupby(reports, key=lambda r: r.config_id):
        group = list(group)
        s = CorpusSummary(cid, scenarios=len(group))
        attempted = [r for r in group if r.same_method_count > 0 and r.conflict_count == 0]
        created = [r for r in group if r.sdg_created]
        ann = [r for r in group if r.annotatable]
        s.attempted, s.created, s.annotatable = len(attempted), len(created), len(ann)
        s.creation_rate = len(created) / len(attempted) if attempted else 0.0
        if ann:
            s.direct_frequency = sum(bool(r.direct_flow_found) for r in ann) / len(ann)
            s.indirect_only_frequency = sum(
                bool(r.indirect_found) and not r.direct_flow_found for r in ann) / len(ann)
        s.nodes_quartiles = _quartiles([r.nodes for r in created])
        s.edges_quartiles = _quartiles([r.edges for r in created])
        out[cid] = asdict(s)
    return out


# -- cross-config comparison -------------------------------------------------------

# (less precise / fewer flows, more flows) along the two monotone axes
MONOTONE_PAIRS = (
    ("instance-noexc", "instance-exc"),
    ("type-noexc", "type-exc"),
    ("instance-noexc", "type-noexc"),
    ("instance-exc", "type-exc"),
)


@dataclass
class Comparison:
    lower: str
    upper: str
    common: int
    violations: list[str]
    d_direct_frequency: float
    d_creation_rate: float
    d_median_nodes: Optional[float]
    d_median_edges: Optional[float]


def _median(q):
    return None if q is None else q[1]


def _delta(a, b):
    return None if a is None or b is None else b - a


def compare_configs(source, pairs: Optional[Iterable[tuple[str, str]]] = None) -> list[Comparison]:
    """Compare configs pairwise; a violation is a scenario where ``upper`` finds fewer direct flows.

    ``source`` is a CSV path, CSV text, or a list of reports. Without
    ``pairs`` the monotone axes present in the data are compared.
    """
    reports = source if isinstance(source, list) else read_csv(source)
    by = {(r.config_id, r.scenario_id): r for r in reports}
    present = {r.config_id for r in reports}
    summary = summarize(reports)
    if pairs is None:
        pairs = [p for p in MONOTONE_PAIRS if p[0] in present and p[1] in present]
    out = []
    for lo, hi in pairs:
        if lo not in present or hi not in present:
            raise SchemaError(f"config {lo if lo not in present else hi} not in report")
        ids = sorted({s for c, s in by if c == lo} & {s for c, s in by if c == hi})
        violations = []
        common = 0
        for sid in ids:
            a, b = by[(lo, sid)], by[(hi, sid)]
            if not (a.annotatable and b.annotatable):
                continue
            common += 1
            if (a.direct_flow_count or 0) > (b.direct_flow_count or 0):
                violations.append(sid)
        sa, sb = summary[lo], summary[hi]
        out.append(Comparison(
            lo, hi, common, violations,
            sb["direct_frequency"] - sa["direct_frequency"],
            sb["creation_rate"] - sa["creation_rate"],
            _delta(_median(sa["nodes_quartiles"]), _median(sb["nodes_quartiles"])),
            _delta(_median(sa["edges_quartiles"]), _median(sb["edges_quartiles"])),
        ))
    return out


def format_comparison(rows: list[Comparison]) -> str:
    head = ["lower", "upper", "common", "violations", "d_direct_freq", "d_creation_rate",
            "d_median_nodes", "d_median_edges"]
    lines = ["\t".join(head)]
    fmt = lambda x: "" if x is None else (f"{x:+.3f}" if isinstance(x, float) else str(x))
    for c in rows:
        lines.append("\t".join([c.lower, c.upper, str(c.common), str(len(c.violations)),
                                fmt(c.d_direct_frequency), fmt(c.d_creation_rate),
                                fmt(c.d_median_nodes), fmt(c.d_median_edges)]))
    return "\n".join(lines) + "\n"
