from typing import Union

from recipetree.executor.base import BaseExecutor  # noqa: F401
from recipetree.executor.plan import ExecutionPlan, NodeSpec  # noqa: F401
from recipetree.executor.report import RunReport  # noqa: F401
from recipetree.models.execution_mode import ExecutionMode
from recipetree.store.experiment_store import ExperimentStore


def run(
    plan: ExecutionPlan,
    mode: Union[str, ExecutionMode] = ExecutionMode.SINGLE_THREADED,
    worker_count: int = 1,
    **options,
) -> RunReport:
    """Run `plan` with a freshly created executor. `options` are further `ExecutorConfig` fields."""
    from recipetree.factory import ExecutorFactory

    return ExecutorFactory.create(mode, {"worker_count": worker_count, **options}).run(plan)


def materialize_node(spec: NodeSpec, store: ExperimentStore):
    from recipetree.executor.single_threaded import SingleThreadedExecutor

    return SingleThreadedExecutor().materialize_node(spec, store)


def cache_lookup(store: ExperimentStore, state_hash) -> bool:
    return store.cache_lookup(state_hash)
