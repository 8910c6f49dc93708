from typing import Any, Optional, Union

from recipetree.config.base_config import BaseConfig
from recipetree.models.execution_mode import ExecutionMode


class ExecutorConfig(BaseConfig):
    """
    Config for running an execution plan.

    :param mode: `single_threaded` (default) or `multi_threaded`
    :type mode: Union[str, ExecutionMode]
    :param worker_count: number of worker threads, defaults to 1. Ignored in single-threaded mode.
    :type worker_count: int
    :param show_progress: draw a progress bar on stderr, defaults to False
    :type show_progress: bool
    :param verify_cache_hits: re-execute cached states in memory and compare payload digests, defaults to False
    :type verify_cache_hits: bool
    """

    def __init__(
        self,
        mode: Union[str, ExecutionMode] = ExecutionMode.SINGLE_THREADED,
        worker_count: int = 1,
        show_progress: bool = False,
        verify_cache_hits: bool = False,
    ):
        if isinstance(worker_count, bool) or not isinstance(worker_count, int) or worker_count < 1:
            raise ValueError(f"worker_count {worker_count} should be a positive integer")
        self.mode = ExecutionMode(mode)
        self.worker_count = worker_count
        self.show_progress = show_progress
        self.verify_cache_hits = verify_cache_hits

    @classmethod
    def for_workers(cls, worker_count: int, **kwargs) -> "ExecutorConfig":
        """One worker means single-threaded; more switches to the multi-threaded executor."""
        mode = ExecutionMode.SINGLE_THREADED if worker_count == 1 else ExecutionMode.MULTI_THREADED
        return cls(mode=mode, worker_count=worker_count, **kwargs)

    @staticmethod
    def from_config(config: Optional[dict[str, Any]]):
        if config is None:
            return ExecutorConfig()
        return ExecutorConfig(
            mode=config.get("mode", ExecutionMode.SINGLE_THREADED.value),
            worker_count=config.get("worker_count", 1),
            show_progress=config.get("show_progress", False),
            verify_cache_hits=config.get("verify_cache_hits", False),
        )
