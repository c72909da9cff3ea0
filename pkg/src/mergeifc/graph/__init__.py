"""Dependence-graph construction: CFGs, dependences, points-to, call graph and SDG."""
from .callgraph import CallGraph, build_call_graph
from .cdg import control_dependence
from .cfg import Cfg, build_cfg
from .config import AnalysisConfig, Precision
from .dataflow import reaching_definitions
from .pointsto import AllocSite, PointsTo, points_to
from .sdg import Node, Sdg, build_sdg, summary_edges

__all__ = [
    "AllocSite", "AnalysisConfig", "CallGraph", "Cfg", "Node", "PointsTo", "Precision", "Sdg",
    "build_call_graph", "build_cfg", "build_sdg", "control_dependence", "points_to",
    "reaching_definitions", "summary_edges",
]
