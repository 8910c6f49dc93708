from typing import Optional


class RecipeTreeError(Exception):
    """Base class for every error raised by recipetree."""


class EncodingError(RecipeTreeError, ValueError):
    """A property value cannot be canonically encoded."""


class GraphError(RecipeTreeError):
    pass


class DuplicateNodeConflictError(GraphError):
    """A node with the same hash but a different descriptor is already in the graph."""


class DanglingEdgeError(GraphError):
    """The parent of a node is not present in the graph."""


class MultiRootError(GraphError):
    """A second root was added to a graph or experiment."""


class NodeNotFoundError(GraphError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "node not found"


class CrossGraphError(GraphError):
    """Node sets bound to different graphs were combined."""


class InvalidGraphError(GraphError):
    def __init__(self, message: str, violations: Optional[list] = None):
        super().__init__(message)
        self.violations = violations or []


class ExperimentError(RecipeTreeError):
    pass


class FrozenExperimentError(ExperimentError):
    """The experiment was already planned or run and can no longer be modified."""


class ForeignPromiseError(ExperimentError):
    """A promise from another experiment was used as a parent."""


class NoRootError(ExperimentError):
    """The experiment has no root state."""


class NodeExecutionError(RecipeTreeError):
    """A recipe or initializer raised while materializing a state."""

    def __init__(self, recipe_name: str, parent_hash: Optional[str], message: str):
        super().__init__(f"{recipe_name} failed on parent {parent_hash or '<root>'}: {message}")
        self.recipe_name = recipe_name
        self.parent_hash = parent_hash


class StoreError(RecipeTreeError):
    pass


class NotAnExperimentError(StoreError):
    """The directory does not contain an experiment.json."""


class IncompatibleStoreError(StoreError):
    """The directory belongs to an experiment with a different root."""


class StateNotFoundError(StoreError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "state not found"


class CorruptStateError(StoreError):
    """A COMPLETE state directory is missing files or fails validation."""


class StorageError(StoreError):
    """Writing to the store failed. Aborts a run."""


class HashPrefixError(RecipeTreeError, LookupError):
    """A hash prefix is too short, matches no state, or matches several."""

    def __init__(self, message: str, candidates: Optional[list] = None):
        super().__init__(message)
        self.candidates = candidates or []
