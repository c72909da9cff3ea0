from __future__ import annotations

import enum
from dataclasses import dataclass


class Precision(str, enum.Enum):
    TYPE_BASED = "TYPE_BASED"
    INSTANCE_BASED = "INSTANCE_BASED"


@dataclass(frozen=True)
class AnalysisConfig:
    """SDG construction options. Defaults are instance-based without exceptions."""

    exceptions: bool = False
    precision: Precision = Precision.INSTANCE_BASED
    node_limit: int = 200_000
    edge_limit: int = 2_000_000

    def __post_init__(self):
        if self.node_limit <= 0 or self.edge_limit <= 0:
            raise ValueError("limits must be positive")

    @property
    def config_id(self) -> str:
        prec = "type" if self.precision is Precision.TYPE_BASED else "instance"
        return f"{prec}-{'exc' if self.exceptions else 'noexc'}"

    @classmethod
    def from_id(cls, config_id: str, **kw) -> "AnalysisConfig":
        prec, exc = config_id.split("-")
        precision = {"type": Precision.TYPE_BASED, "instance": Precision.INSTANCE_BASED}[prec]
        return cls(exceptions={"exc": True, "noexc": False}[exc], precision=precision, **kw)
