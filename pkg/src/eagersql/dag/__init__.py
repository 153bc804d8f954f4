"""Speculation DAG: vertices over temp tables, matching, rewriting, scheduling."""

from eagersql.dag.model import DagEdge, DagVertex, SpecDag
from eagersql.dag.matching import MatchRewrite, find_match, rewrite
from eagersql.dag.build import build_dag, evolve_dag
from eagersql.dag.scheduling import schedule

__all__ = [
    "DagVertex",
    "DagEdge",
    "SpecDag",
    "MatchRewrite",
    "find_match",
    "rewrite",
    "build_dag",
    "evolve_dag",
    "schedule",
]
