import concurrent.futures
import logging

from recipetree.executor.base import BaseExecutor, RunRecorder
from recipetree.executor.plan import ExecutionPlan
from recipetree.store.experiment_store import ExperimentStore

logger = logging.getLogger(__name__)


class MultiThreadedExecutor(BaseExecutor):
    """
    Materializes independent nodes on a thread pool of `worker_count` workers.

    A node is submitted once its parent is materialized. Ready nodes are submitted in plan order. Every node
    reads its parent back from the store, so concurrent siblings never share state.
    """

    def _execute(self, plan: ExecutionPlan, store: ExperimentStore, recorder: RunRecorder):
        pending = list(plan.nodes)
        running: dict[concurrent.futures.Future, str] = {}
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.worker_count) as pool:
            try:
                while pending or running:
                    waiting = []
                    for spec in pending:
                        if spec.is_root or recorder.is_materialized(spec.parent_hash):
                            running[pool.submit(self.process_node, spec, store, recorder)] = spec.hash.short
                        elif recorder.is_unsuccessful(spec.parent_hash):
                            self.block(spec, recorder)
                        else:
                            waiting.append(spec)
                    pending = waiting
                    if not running:
                        break
                    finished, _ = concurrent.futures.wait(running, return_when=concurrent.futures.FIRST_COMPLETED)
                    for future in finished:
                        del running[future]
                        future.result()
            except BaseException:
                for future in running:
                    future.cancel()
                logger.error(f"Run aborted with {len(running)} states in flight")
                raise
