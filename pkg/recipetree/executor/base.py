import hashlib
import logging
import threading
import time
from abc import ABC, abstractmethod
from typing import Any, Optional

from tqdm import tqdm

from recipetree.config.executor_config import ExecutorConfig
from recipetree.core.descriptors import StateDescriptor
from recipetree.core.hashing import StateHash, hash_root
from recipetree.core.validation import inherited_property_violations
from recipetree.errors import NodeExecutionError, RecipeTreeError, StorageError
from recipetree.executor.plan import ExecutionPlan, NodeSpec
from recipetree.executor.report import RunReport
from recipetree.models.progress_event import ProgressEvent
from recipetree.models.state_status import StateStatus
from recipetree.recipes.contents import StateContents
from recipetree.store.experiment_store import ExperimentStore, Payloads
from recipetree.utils.logging import ProgressLog

logger = logging.getLogger(__name__)


class RunRecorder:
    """Thread-safe bookkeeping of a run, turned into a `RunReport` at the end."""

    def __init__(self, plan: ExecutionPlan, progress_bar: Optional[tqdm] = None):
        self._lock = threading.Lock()
        self._order = {h: index for index, h in enumerate(plan.hashes)}
        self._progress_bar = progress_bar
        self.materialized: set[StateHash] = set()
        self.unsuccessful: set[StateHash] = set()
        self._outcomes: dict[str, list[StateHash]] = {
            "executed": [],
            "cache_hits": [],
            "failed": [],
            "blocked": [],
            "nondeterministic": [],
        }
        self._invocations: dict[StateHash, int] = {}
        self._function_errors: dict[StateHash, list[str]] = {}

    def _finish(self, state_hash: StateHash, outcome: str, success: bool):
        with self._lock:
            self._outcomes[outcome].append(state_hash)
            (self.materialized if success else self.unsuccessful).add(state_hash)
            if self._progress_bar is not None:
                self._progress_bar.update(1)

    def executed(self, state_hash: StateHash):
        self._finish(state_hash, "executed", True)

    def cache_hit(self, state_hash: StateHash):
        self._finish(state_hash, "cache_hits", True)

    def failed(self, state_hash: StateHash):
        self._finish(state_hash, "failed", False)

    def blocked(self, state_hash: StateHash):
        self._finish(state_hash, "blocked", False)

    def nondeterministic(self, state_hash: StateHash):
        with self._lock:
            self._outcomes["nondeterministic"].append(state_hash)

    def functions_done(self, state_hash: StateHash, invocations: int, errors: list[str]):
        with self._lock:
            self._invocations[state_hash] = invocations
            if errors:
                self._function_errors[state_hash] = errors

    def is_materialized(self, state_hash: StateHash) -> bool:
        with self._lock:
            return state_hash in self.materialized

    def is_unsuccessful(self, state_hash: StateHash) -> bool:
        with self._lock:
            return state_hash in self.unsuccessful

    def report(self, wall_time: float) -> RunReport:
        with self._lock:
            ordered = {name: sorted(hashes, key=self._order.get) for name, hashes in self._outcomes.items()}
            invocations = {h: self._invocations[h] for h in sorted(self._invocations, key=self._order.get)}
            return RunReport(
                **ordered,
                function_invocations=invocations,
                function_errors=dict(self._function_errors),
                wall_time=wall_time,
            )


class BaseExecutor(ABC):
    """
    Runs an `ExecutionPlan` against an experiment store.

    Each node is restored from the cache when the store holds a complete state for its hash, and executed
    otherwise. A recipe failure marks the node failed and blocks its subtree; other branches continue.
    A storage failure aborts the run.
    """

    def __init__(self, config: Optional[ExecutorConfig] = None):
        """
        :param config: executor settings, defaults to a single-threaded `ExecutorConfig`
        :type config: Optional[ExecutorConfig]
        """
        self.config = config or ExecutorConfig()
        self.progress = ProgressLog()

    def run(self, plan: ExecutionPlan, store: Optional[ExperimentStore] = None) -> RunReport:
        """
        Materialize every node of the plan and invoke its functions.

        :param plan: the frozen plan
        :type plan: ExecutionPlan
        :param store: store to persist into, defaults to the plan's directory (initialized if needed)
        :type store: Optional[ExperimentStore]
        :raises IncompatibleStoreError: the directory belongs to another experiment
        :raises StorageError: a state could not be written
        :return: the run report
        :rtype: RunReport
        """
        if store is None:
            store = ExperimentStore.init_experiment_dir(plan.directory, plan.root_hash)
        start = time.perf_counter()
        with tqdm(total=len(plan), desc="Materializing states", disable=not self.config.show_progress) as bar:
            recorder = RunRecorder(plan, progress_bar=bar)
            self._execute(plan, store, recorder)
        report = recorder.report(wall_time=time.perf_counter() - start)
        logger.info(f"Run finished in {report.wall_time:.3f}s: {report.summary()}")
        return report

    @abstractmethod
    def _execute(self, plan: ExecutionPlan, store: ExperimentStore, recorder: RunRecorder):
        raise NotImplementedError()

    def block(self, spec: NodeSpec, recorder: RunRecorder):
        logger.warning(f"Skipping {spec.name} {spec.hash.short}: parent {spec.parent_hash.short} did not materialize")
        recorder.blocked(spec.hash)

    def process_node(self, spec: NodeSpec, store: ExperimentStore, recorder: RunRecorder):
        """Materialize one node and run its functions, recording the outcome. Only storage failures raise."""
        try:
            descriptor, cached = self._materialize(spec, store)
        except StorageError:
            self.progress.record(spec.hash, ProgressEvent.FAIL, spec.name)
            raise
        except RecipeTreeError as e:
            logger.error(f"State {spec.hash.short} failed: {e}")
            self.progress.record(spec.hash, ProgressEvent.FAIL, spec.name)
            recorder.failed(spec.hash)
            return

        if cached:
            self.progress.record(spec.hash, ProgressEvent.CACHE, spec.name)
            if self.config.verify_cache_hits and not self._verify_cache_hit(spec, store, descriptor):
                recorder.nondeterministic(spec.hash)
        else:
            self.progress.record(spec.hash, ProgressEvent.EXEC, spec.name)
        self._run_functions(spec, store, recorder)
        (recorder.cache_hit if cached else recorder.executed)(spec.hash)

    def materialize_node(self, spec: NodeSpec, store: ExperimentStore) -> StateDescriptor:
        """
        Restore `spec` from the cache or execute it and persist the result.

        :raises NodeExecutionError: the initializer or recipe raised or returned unusable contents
        :raises StorageError: the state could not be written
        :return: the stored descriptor
        :rtype: StateDescriptor
        """
        descriptor, _ = self._materialize(spec, store)
        return descriptor

    def _materialize(self, spec: NodeSpec, store: ExperimentStore) -> tuple[StateDescriptor, bool]:
        status = store.state_status(spec.hash)
        if status is StateStatus.COMPLETE:
            return store.update_tags(spec.hash, spec.tags), True
        if status is StateStatus.CORRUPT:
            logger.warning(f"Cached state {spec.hash.short} fails validation, executing it again")
            store.quarantine(spec.hash)

        properties, payloads = self._compute(spec, store)
        descriptor = StateDescriptor(
            hash=spec.hash,
            parent_hash=spec.parent_hash,
            recipe=spec.recipe_descriptor,
            properties=properties,
            nonhashed_attribute_names=tuple(sorted(payloads)),
            tags=spec.tags,
        )
        store.save_state(descriptor, payloads)
        return descriptor, False

    def _compute(self, spec: NodeSpec, store: ExperimentStore) -> tuple[dict[str, Any], Payloads]:
        """Run the initializer or recipe and merge its output over the parent. Nothing is written."""
        parent_hash = spec.parent_hash.hex if spec.parent_hash is not None else None
        self._check_unchanged(spec, parent_hash)
        if spec.is_root:
            contents = self._call(spec, parent_hash, spec.initializer)
            properties = dict(spec.initializer.properties)
            if any(properties.get(key) != value for key, value in contents.properties.items()):
                raise NodeExecutionError(spec.name, None, "initialize_state must not change the root properties")
            payloads = dict(contents.payloads)
        else:
            # a fresh read from the store, never an object shared with a sibling
            parent = store.load_view(spec.parent_hash)
            contents = self._call(spec, parent_hash, spec.recipe.run, parent)
            properties = {**parent.descriptor.properties, **contents.properties}
            inherited = parent.descriptor.properties
            inconsistent = inherited_property_violations(inherited, spec.recipe_descriptor, properties)
            if inconsistent:
                raise NodeExecutionError(spec.name, parent_hash, "; ".join(v.message for v in inconsistent))
            payloads = {**parent.payloads, **contents.payloads}

        overlap = sorted(set(properties) & set(payloads))
        if overlap:
            raise NodeExecutionError(spec.name, parent_hash, f"names used as property and payload: {overlap}")
        return properties, payloads

    @staticmethod
    def _check_unchanged(spec: NodeSpec, parent_hash: Optional[str]):
        """The recipe or initializer must still carry the properties its hash was computed from."""
        if spec.is_root:
            if hash_root(spec.initializer.properties) != spec.hash:
                raise NodeExecutionError(spec.name, None, "initializer properties changed after spawn_new_tree")
        elif spec.recipe.descriptor != spec.recipe_descriptor:
            raise NodeExecutionError(
                spec.name,
                parent_hash,
                f"recipe properties changed after derive: hashed {spec.recipe_descriptor.properties}, "
                f"now {spec.recipe.descriptor.properties}",
            )

    @staticmethod
    def _call(spec: NodeSpec, parent_hash: Optional[str], action, *args) -> StateContents:
        try:
            contents = action(*args)
        except Exception as e:
            raise NodeExecutionError(spec.name, parent_hash, f"{type(e).__name__}: {e}") from e
        if not isinstance(contents, StateContents):
            raise NodeExecutionError(spec.name, parent_hash, f"returned {type(contents).__name__}, not StateContents")
        return contents

    def _verify_cache_hit(self, spec: NodeSpec, store: ExperimentStore, descriptor: StateDescriptor) -> bool:
        """Execute a cached node again in memory and compare properties and payload digests with the store."""
        try:
            properties, payloads = self._compute(spec, store)
        except NodeExecutionError as e:
            logger.error(f"Verification of cached state {spec.hash.short} failed to execute: {e}")
            return False
        _, stored = store.restore_state_full(spec.hash)
        fresh_digests = {name: hashlib.sha256(blob).hexdigest() for name, blob in payloads.items()}
        stored_digests = {name: hashlib.sha256(blob).hexdigest() for name, blob in stored.items()}
        if properties != descriptor.properties or fresh_digests != stored_digests:
            names = fresh_digests.keys() | stored_digests.keys()
            changed = sorted(name for name in names if fresh_digests.get(name) != stored_digests.get(name))
            logger.error(f"Cached state {spec.hash.short} ({spec.name}) is not reproducible, changed: {changed}")
            return False
        logger.debug(f"Cached state {spec.hash.short} reproduced")
        return True

    def _run_functions(self, spec: NodeSpec, store: ExperimentStore, recorder: RunRecorder):
        invocations = 0
        errors = []
        for function in spec.functions:
            invocations += 1
            try:
                function(store.load_view(spec.hash))
            except Exception as e:
                logger.exception(f"Function {function.name} failed on state {spec.hash.short}")
                self.progress.record(spec.hash, ProgressEvent.FAIL, function.name)
                errors.append(f"{function.name}: {e}")
                continue
            self.progress.record(spec.hash, ProgressEvent.FUNC, function.name)
        recorder.functions_done(spec.hash, invocations, errors)
