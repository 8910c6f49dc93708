import logging
from pathlib import Path
from typing import Iterable, Optional

import networkx as nx
from pydantic import BaseModel, ConfigDict

from recipetree.core.descriptors import RecipeDescriptor
from recipetree.core.hashing import StateHash
from recipetree.errors import DanglingEdgeError, MultiRootError, NoRootError
from recipetree.recipes.function import Function
from recipetree.recipes.initializer import StateInitializer
from recipetree.recipes.recipe import Recipe

logger = logging.getLogger(__name__)


class NodeSpec(BaseModel):
    """Everything the executor needs to materialize one state: a snapshot of a promise at planning time."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hash: StateHash
    parent_hash: Optional[StateHash] = None
    recipe: Optional[Recipe] = None
    recipe_descriptor: Optional[RecipeDescriptor] = None
    initializer: Optional[StateInitializer] = None
    tags: frozenset[str] = frozenset()
    functions: tuple[Function, ...] = ()

    @property
    def is_root(self) -> bool:
        return self.parent_hash is None

    @property
    def name(self) -> str:
        if self.recipe_descriptor is not None:
            return self.recipe_descriptor.name
        return type(self.initializer).__name__

    def merged_with(self, other: "NodeSpec") -> "NodeSpec":
        """Collapse a duplicate spec for the same state: tags are unioned, hooks appended."""
        return self.model_copy(update={"tags": self.tags | other.tags, "functions": self.functions + other.functions})


class ExecutionPlan(BaseModel):
    """
    A frozen, topologically ordered list of node specs. Parents come before children; among nodes whose
    parents are placed, the one defined first goes first.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    directory: Path
    nodes: tuple[NodeSpec, ...]

    @classmethod
    def build(cls, directory: Path, specs: Iterable[NodeSpec]) -> "ExecutionPlan":
        """
        :param directory: experiment directory the plan persists into
        :type directory: Path
        :param specs: node specs in definition order. Specs sharing a hash are merged.
        :type specs: Iterable[NodeSpec]
        :raises NoRootError: no spec without a parent
        :raises MultiRootError: more than one distinct root
        :raises DanglingEdgeError: a spec's parent is not in the plan
        """
        merged: dict[StateHash, NodeSpec] = {}
        for spec in specs:
            merged[spec.hash] = merged[spec.hash].merged_with(spec) if spec.hash in merged else spec

        roots = [h for h, spec in merged.items() if spec.is_root]
        if not roots:
            raise NoRootError("The experiment has no root state")
        if len(roots) > 1:
            raise MultiRootError(f"The experiment has {len(roots)} roots")

        definition_index = {h: index for index, h in enumerate(merged)}
        graph = nx.DiGraph()
        graph.add_nodes_from(merged)
        for spec in merged.values():
            if spec.is_root:
                continue
            if spec.parent_hash not in merged:
                raise DanglingEdgeError(f"Parent {spec.parent_hash.short} of {spec.hash.short} is not in the plan")
            graph.add_edge(spec.parent_hash, spec.hash)

        order = nx.lexicographical_topological_sort(graph, key=lambda h: definition_index[h])
        plan = cls(directory=Path(directory), nodes=tuple(merged[h] for h in order))
        logger.debug(f"Built plan of {len(plan.nodes)} states rooted at {plan.root_hash.short}")
        return plan

    @property
    def root_hash(self) -> StateHash:
        return self.nodes[0].hash

    @property
    def hashes(self) -> list[StateHash]:
        return [spec.hash for spec in self.nodes]

    def __len__(self) -> int:
        return len(self.nodes)
