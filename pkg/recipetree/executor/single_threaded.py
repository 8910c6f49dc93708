from recipetree.executor.base import BaseExecutor, RunRecorder
from recipetree.executor.plan import ExecutionPlan
from recipetree.store.experiment_store import ExperimentStore


class SingleThreadedExecutor(BaseExecutor):
    """Materializes the plan in order on the calling thread. The default mode."""

    def _execute(self, plan: ExecutionPlan, store: ExperimentStore, recorder: RunRecorder):
        for spec in plan.nodes:
            if not spec.is_root and recorder.is_unsuccessful(spec.parent_hash):
                self.block(spec, recorder)
                continue
            self.process_node(spec, store, recorder)
