from pathlib import Path
from typing import Union

from recipetree.core.descriptors import StateDescriptor
from recipetree.core.hashing import StateHash
from recipetree.graph.experiment_graph import ExperimentGraph
from recipetree.store.experiment_store import ExperimentStore, LoadReport, Payloads, directory_digest  # noqa: F401


# Convenience functions mirroring the store operations
def init_experiment_dir(path: Union[str, Path], root_hash: StateHash) -> ExperimentStore:
    return ExperimentStore.init_experiment_dir(path, root_hash)


def save_state(store: ExperimentStore, descriptor: StateDescriptor, payloads: Payloads) -> None:
    store.save_state(descriptor, payloads)


def cache_lookup(store: ExperimentStore, state_hash: StateHash) -> bool:
    return store.cache_lookup(state_hash)


def load_graph_slim(path: Union[str, Path]) -> tuple[ExperimentGraph, LoadReport]:
    return ExperimentStore.open(path).load_graph_slim()


def restore_state_full(store: ExperimentStore, state_hash: StateHash) -> tuple[StateDescriptor, Payloads]:
    return store.restore_state_full(state_hash)
