"""Semi-structured three-way merge of MJ programs and per-line attribution.

Classes and members are matched by name across base/left/right. Member
bodies are merged line-wise with :func:`merge_body_diff3`. The merged text is
then blamed by diffing it against the three inputs, so every merged line gets
exactly one origin.
"""
from __future__ import annotations

import difflib
import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .lang import ast as A
from .lang.parser import parse
from .lang.pretty import pretty
from .lang.resolver import ResolvedProgram, resolve

log = logging.getLogger(__name__)


class Origin(str, enum.Enum):
    BASE = "BASE"
    LEFT = "LEFT"
    RIGHT = "RIGHT"


NO_SOURCE_OR_SINK_LINES = "NO_SOURCE_OR_SINK_LINES"


@dataclass(frozen=True)
class Hunk:
    """A conflicting region: base lines ``[base_start, base_end)`` (0-based) and each side's text."""
    base_start: int
    base_end: int
    left: tuple[str, ...]
    right: tuple[str, ...]

    def describe(self) -> str:
        lo, hi = self.base_start + 1, max(self.base_end, self.base_start + 1)
        return f"base lines {lo}-{hi}" if hi > lo else f"base line {lo}"


@dataclass(frozen=True)
class Diff3Result:
    lines: Optional[list[str]]
    conflicts: list[Hunk]

    @property
    def ok(self) -> bool:
        return not self.conflicts


@dataclass(frozen=True)
class MethodEdit:
    method: str
    left_lines: frozenset[int]
    right_lines: frozenset[int]


@dataclass
class MergeScenario:
    base: str
    left: str
    right: str
    name: str = "scenario"

    def __post_init__(self):
        self.programs = {
            "base": parse(self.base, f"{self.name}/base.mj"),
            "left": parse(self.left, f"{self.name}/left.mj"),
            "right": parse(self.right, f"{self.name}/right.mj"),
        }
        for p in self.programs.values():
            resolve(p)

    @classmethod
    def from_dir(cls, path) -> "MergeScenario":
        path = Path(path)
        read = lambda n: (path / n).read_text(encoding="utf-8")
        return cls(read("base.mj"), read("left.mj"), read("right.mj"), name=path.name)

    def swapped(self) -> "MergeScenario":
        return MergeScenario(self.base, self.right, self.left, name=self.name)


@dataclass
class MergeOutcome:
    merged_text: str
    program: Optional[A.Program]
    resolved: Optional[ResolvedProgram]
    conflicts: list[tuple[str, Hunk]]
    method_edits: list[MethodEdit] = field(default_factory=list)
    attribution: dict[int, Origin] = field(default_factory=dict)
    dropped: list[tuple[str, str]] = field(default_factory=list)
    # method id -> sides whose member text differs from base
    changed_by: dict[str, frozenset[str]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    layout_normalized: bool = False


# -- line-level three-way merge ---------------------------------------------

def _norm(lines):
    return [ln.rstrip() for ln in lines]


def _edits(base, other):
    sm = difflib.SequenceMatcher(None, _norm(base), _norm(other), autojunk=False)
    return [(i1, i2, tuple(other[j1:j2])) for tag, i1, i2, j1, j2 in sm.get_opcodes() if tag != "equal"]


def _clash(a, b) -> bool:
    (s1, e1, _), (s2, e2, _) = a, b
    if s1 < e2 and s2 < e1:
        return True
    if s1 == e1 == s2 == e2:
        return True
    if s1 == e1 and s2 < s1 < e2:
        return True
    return s2 == e2 and s1 < s2 < e1


def merge_body_diff3(base_lines, left_lines, right_lines) -> Diff3Result:
    """Merge two derived line lists against their common ancestor.

    Non-overlapping hunks are taken from whichever side changed them;
    identical hunks merge to one copy; anything else overlapping is reported
    as a conflict and ``lines`` is None.
    """
    base_lines = list(base_lines)
    le = _edits(base_lines, list(left_lines))
    re_ = _edits(base_lines, list(right_lines))
    conflicts = []
    for a in le:
        for b in re_:
            if (a[0], a[1], _norm(a[2])) == (b[0], b[1], _norm(b[2])):
                continue
            if _clash(a, b):
                conflicts.append(Hunk(min(a[0], b[0]), max(a[1], b[1]), a[2], b[2]))
    if conflicts:
        return Diff3Result(None, conflicts)
    seen = {(s, e, tuple(_norm(r))) for s, e, r in le}
    edits = sorted(le + [x for x in re_ if (x[0], x[1], tuple(_norm(x[2]))) not in seen])
    out, pos = [], 0
    for s, e, repl in edits:
        out += base_lines[pos:s]
        out += repl
        pos = max(pos, e)
    out += base_lines[pos:]
    return Diff3Result(out, [])


def _conflict_text(h: Hunk) -> list[str]:
    return ["<<<<<<< LEFT", *h.left, "=======", *h.right, ">>>>>>> RIGHT"]


# -- member chunking ---------------------------------------------------------

class _LayoutError(Exception):
    pass


@dataclass
class _ClassChunks:
    name: str
    header: list[str]
    members: dict[tuple[str, str], list[str]]
    order: list[tuple[str, str]]
    trailer: list[str]


def _chunk(program: A.Program, text: str):
    """Split ``text`` into per-class header, member and trailer line chunks.

    Requires each class header on its own line and each member starting on a
    fresh line; otherwise raises _LayoutError.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    classes = []
    prev_end = 0
    for c in program.classes:
        if c.first_line <= prev_end:
            raise _LayoutError(c.name)
        header = lines[prev_end:c.first_line]
        members = [(("field", f.name), f.line, f.line) for f in c.fields]
        members += [(("method", m.name), m.first_line, m.last_line) for m in c.methods]
        members.sort(key=lambda t: t[1])
        chunks, order = {}, []
        cur = c.first_line
        for key, first, last in members:
            if first <= cur:
                raise _LayoutError(f"{c.name}.{key[1]}")
            chunks[key] = lines[cur:last]
            order.append(key)
            cur = last
        if c.last_line <= cur:
            raise _LayoutError(c.name)
        trailer = lines[cur:c.last_line]
        classes.append(_ClassChunks(c.name, header, chunks, order, trailer))
        prev_end = c.last_line
    tail = lines[prev_end:]
    return classes, tail


def _merge_order(base, left, right):
    """Base order, with each side's additions placed after their nearest surviving predecessor."""
    out = list(base)
    left_added = set()
    for side, tag in ((left, "L"), (right, "R")):
        for i, k in enumerate(side):
            if k in out:
                continue
            pred = next((p for p in reversed(side[:i]) if p in out), None)
            pos = 0 if pred is None else out.index(pred) + 1
            if tag == "R":
                while pos < len(out) and out[pos] in left_added:
                    pos += 1
            else:
                left_added.add(k)
            out.insert(pos, k)
    return out


class _Merger:
    def __init__(self):
        self.conflicts: list[tuple[str, Hunk]] = []

    def three(self, where: str, b, l, r) -> list[str]:
        res = merge_body_diff3(b, l, r)
        if res.ok:
            return res.lines
        out = []
        for h in res.conflicts:
            self.conflicts.append((where, h))
            out += _conflict_text(h)
        return out

    def optional(self, where: str, b, l, r) -> Optional[list[str]]:
        """Merge a unit that may be absent (None) in some versions."""
        if b is None:
            if l is None:
                return r
            if r is None:
                return l
            return self.three(where, [], l, r)
        if l is None and r is None:
            return None
        if l is None or r is None:
            present = l if l is not None else r
            if _norm(present) == _norm(b):
                return None
            h = Hunk(0, len(b), tuple(l or ()), tuple(r or ()))
            self.conflicts.append((where, h))
            return _conflict_text(h)
        return self.three(where, b, l, r)


def _merge_texts(texts: dict[str, str], programs: dict[str, A.Program]):
    chunks = {k: _chunk(programs[k], texts[k]) for k in ("base", "left", "right")}
    by_name = {k: {c.name: c for c in chunks[k][0]} for k in chunks}
    order = _merge_order(*[[c.name for c in chunks[k][0]] for k in ("base", "left", "right")])
    mg = _Merger()
    out: list[str] = []
    changed_by: dict[str, set[str]] = {}
    for cname in order:
        b, l, r = (by_name[k].get(cname) for k in ("base", "left", "right"))
        if b is not None and (l is None or r is None):
            # whole-class deletion: fall back to member-free comparison
            merged = mg.optional(cname, _flat(b), _flat(l) if l else None, _flat(r) if r else None)
            if merged is not None:
                out += merged
            continue
        get = lambda c, attr: getattr(c, attr) if c is not None else None
        empty = [] if b is None else None
        header = mg.optional(f"{cname}:header", get(b, "header") if b else empty,
                             get(l, "header"), get(r, "header"))
        out += header or []
        morder = _merge_order(*[c.order if c else [] for c in (b, l, r)])
        for key in morder:
            versions = [c.members.get(key) if c else None for c in (b, l, r)]
            where = f"{cname}.{key[1]}"
            merged = mg.optional(where, *versions)
            if key[0] == "method":
                bv = versions[0]
                changed_by[where] = {
                    side for side, v in zip(("left", "right"), versions[1:])
                    if (v is None) != (bv is None) or (v is not None and _norm(v) != _norm(bv))
                }
            if merged is not None:
                out += merged
        trailer = mg.optional(f"{cname}:trailer", get(b, "trailer") if b else empty,
                              get(l, "trailer"), get(r, "trailer"))
        out += trailer or []
    out += mg.three("<eof>", chunks["base"][1], chunks["left"][1], chunks["right"][1])
    text = "\n".join(out) + ("\n" if out else "")
    return text, mg.conflicts, {k: frozenset(v) for k, v in changed_by.items()}


def _flat(c: _ClassChunks) -> list[str]:
    out = list(c.header)
    for k in c.order:
        out += c.members[k]
    return out + c.trailer


# -- attribution ---------------------------------------------------------------

def _lines(text: str) -> list[str]:
    ls = text.split("\n")
    if ls and ls[-1] == "":
        ls.pop()
    return ls


def _added(base: list[str], side: list[str]) -> set[int]:
    sm = difflib.SequenceMatcher(None, _norm(base), _norm(side), autojunk=False)
    matched = set()
    for blk in sm.get_matching_blocks():
        matched.update(range(blk.b, blk.b + blk.size))
    return set(range(len(side))) - matched


def _mapping(merged: list[str], side: list[str]) -> dict[int, int]:
    sm = difflib.SequenceMatcher(None, _norm(merged), _norm(side), autojunk=False)
    out = {}
    for blk in sm.get_matching_blocks():
        for k in range(blk.size):
            out[blk.a + k] = blk.b + k
    return out


def attribute_lines(scenario: MergeScenario, merged_text: str) -> dict[int, Origin]:
    """Blame each line of ``merged_text`` (1-based) on LEFT, RIGHT or BASE.

    A merged line aligned with a line that left added relative to base is
    LEFT (likewise RIGHT). A line both sides added identically is BASE.
    """
    return _attribute(scenario.base, scenario.left, scenario.right, merged_text)


def _attribute(base_t, left_t, right_t, merged_t) -> dict[int, Origin]:
    base, left, right, merged = map(_lines, (base_t, left_t, right_t, merged_t))
    l_added, r_added = _added(base, left), _added(base, right)
    l_map, r_map = _mapping(merged, left), _mapping(merged, right)
    out = {}
    for i in range(len(merged)):
        from_l = i in l_map and l_map[i] in l_added
        from_r = i in r_map and r_map[i] in r_added
        if from_l and not from_r:
            out[i + 1] = Origin.LEFT
        elif from_r and not from_l:
            out[i + 1] = Origin.RIGHT
        else:
            out[i + 1] = Origin.BASE
    return out


# -- same-method detection -------------------------------------------------------

def _same_method(outcome: MergeOutcome):
    edits, dropped = [], []
    if outcome.conflicts or outcome.program is None:
        return edits, dropped
    for m in outcome.program.methods():
        span = m.line_span
        left = frozenset(ln for ln in span if outcome.attribution.get(ln) is Origin.LEFT)
        right = frozenset(ln for ln in span if outcome.attribution.get(ln) is Origin.RIGHT)
        if left and right:
            edits.append(MethodEdit(m.mid, left, right))
        elif outcome.changed_by.get(m.mid) == frozenset({"left", "right"}):
            dropped.append((m.mid, NO_SOURCE_OR_SINK_LINES))
            log.info("dropping %s: %s", m.mid, NO_SOURCE_OR_SINK_LINES)
    return edits, dropped


def find_same_method_edits(outcome: MergeOutcome) -> list[MethodEdit]:
    """Methods whose merged line span holds at least one LEFT and one RIGHT line."""
    return _same_method(outcome)[0]


def merge_members(scenario: MergeScenario) -> MergeOutcome:
    """Merge ``scenario`` member-wise and, if conflict-free, attribute lines and find shared methods."""
    texts = {"base": scenario.base, "left": scenario.left, "right": scenario.right}
    programs = scenario.programs
    normalized = False
    try:
        merged_text, conflicts, changed_by = _merge_texts(texts, programs)
    except _LayoutError:
        normalized = True
        texts = {k: pretty(p) for k, p in programs.items()}
        programs = {k: parse(t) for k, t in texts.items()}
        merged_text, conflicts, changed_by = _merge_texts(texts, programs)
    outcome = MergeOutcome(merged_text, None, None, conflicts, changed_by=changed_by,
                           layout_normalized=normalized)
    for side in ("left", "right"):
        ops = difflib.SequenceMatcher(None, _lines(texts["base"]), _lines(texts[side]),
                                      autojunk=False).get_opcodes()
        tags = {op[0] for op in ops} - {"equal"}
        if tags == {"delete"}:
            outcome.notes.append(f"{side.upper()}_PURE_DELETION")
    if conflicts:
        return outcome
    outcome.program = parse(merged_text, f"{scenario.name}/merged.mj")
    outcome.resolved = resolve(outcome.program)
    outcome.attribution = _attribute(texts["base"], texts["left"], texts["right"], merged_text)
    outcome.method_edits, outcome.dropped = _same_method(outcome)
    return outcome
