"""Per-method control-flow graphs with optional exceptional edges."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..lang import ast as A
from .config import AnalysisConfig

ENTRY = 0
EXIT = 1

NORMAL = "normal"
EXCEPTION = "exception"


@dataclass
class Cfg:
    method: str
    # index -> statement; ENTRY and EXIT map to None
    stmts: dict[int, Optional[A.Stmt]] = field(default_factory=lambda: {ENTRY: None, EXIT: None})
    edges: set[tuple[int, int, str]] = field(default_factory=set)

    @property
    def nodes(self) -> list[int]:
        return sorted(self.stmts)

    def succ(self, n: int, kinds=(NORMAL, EXCEPTION)) -> list[int]:
        return sorted({v for u, v, k in self.edges if u == n and k in kinds})

    def pred(self, n: int, kinds=(NORMAL, EXCEPTION)) -> list[int]:
        return sorted({u for u, v, k in self.edges if v == n and k in kinds})

    def line(self, n: int) -> Optional[int]:
        s = self.stmts[n]
        return None if s is None else s.line

    def without_exceptions(self) -> "Cfg":
        return Cfg(self.method, dict(self.stmts), {e for e in self.edges if e[2] == NORMAL})


def may_throw_implicitly(s) -> bool:
    """Possibly-null field access (any receiver other than ``this``) or a division."""
    roots = list(A.stmt_exprs(s))
    if isinstance(s, A.Assign) and isinstance(s.target, A.FieldRead):
        if not isinstance(s.target.receiver, A.This):
            return True
    for root in roots:
        for e in A.sub_exprs(root):
            if isinstance(e, A.FieldRead) and not isinstance(e.receiver, A.This):
                return True
            if isinstance(e, A.Binary) and e.op == "/":
                return True
    return False


def build_cfg(method: A.MethodDecl, config: AnalysisConfig = AnalysisConfig()) -> Cfg:
    """Structured CFG for ``method``.

    Node ids are ENTRY=0, EXIT=1, then statements numbered 2.. in source
    preorder, so ids are stable across configurations.
    """
    cfg = Cfg(method.mid)
    counter = [2]

    def connect(preds, n):
        for p in preds:
            cfg.edges.add((p, n, NORMAL))

    def block(body, preds):
        for s in body:
            n = counter[0]
            counter[0] += 1
            cfg.stmts[n] = s
            connect(preds, n)
            if config.exceptions and not isinstance(s, A.Throw) and may_throw_implicitly(s):
                cfg.edges.add((n, EXIT, EXCEPTION))
            if isinstance(s, A.If):
                preds = block(s.then, [n]) + (block(s.orelse, [n]) if s.orelse else [n])
            elif isinstance(s, A.While):
                connect(block(s.body, [n]), n)
                preds = [n]
            elif isinstance(s, A.Return):
                cfg.edges.add((n, EXIT, NORMAL))
                preds = []
            elif isinstance(s, A.Throw):
                cfg.edges.add((n, EXIT, EXCEPTION if config.exceptions else NORMAL))
                preds = []
            else:
                preds = [n]
        return preds

    connect(block(method.body, [ENTRY]), EXIT)
    return cfg
