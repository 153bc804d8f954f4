"""Statement execution: guarding, adapters, registry, plan cache, engine."""

from eagersql.executor.registry import TempRegistry, TempTableRecord
from eagersql.executor.guard import guard
from eagersql.executor.adapter import Adapter, MockAdapter, SqliteAdapter
from eagersql.executor.plancache import PlanCache
from eagersql.executor.engine import ExecutionEngine, ExecutionResult, ResourceBudget

__all__ = [
    "TempRegistry",
    "TempTableRecord",
    "guard",
    "Adapter",
    "MockAdapter",
    "SqliteAdapter",
    "PlanCache",
    "ExecutionEngine",
    "ExecutionResult",
    "ResourceBudget",
]
