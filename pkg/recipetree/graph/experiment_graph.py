import logging
from types import MappingProxyType
from typing import TYPE_CHECKING, Mapping, Optional

import networkx as nx

from recipetree.core.descriptors import RecipeDescriptor, StateDescriptor
from recipetree.core.hashing import StateHash
from recipetree.core.serialization import state_to_json
from recipetree.core.validation import validate_inheritance, validate_state
from recipetree.errors import (DanglingEdgeError, DuplicateNodeConflictError, InvalidGraphError, MultiRootError,
                               NodeNotFoundError, StoreError)
from recipetree.graph.node_set import NodeSet
from recipetree.models.violation import Violation, ViolationCode

if TYPE_CHECKING:
    from recipetree.store.experiment_store import ExperimentStore

logger = logging.getLogger(__name__)

ProvenancePath = list[tuple[StateHash, Optional[RecipeDescriptor]]]


class ExperimentGraph:
    """
    The experiment tree: states keyed by hash, single-parent links and ordered child lists.

    The graph is only written through `add_node`; once built it is read-only and safe to share between threads.
    """

    def __init__(self, source: Optional["ExperimentStore"] = None):
        """
        :param source: store the states were loaded from, used by `restore_state`, defaults to None
        :type source: Optional[ExperimentStore]
        """
        self._descriptors: dict[StateHash, StateDescriptor] = {}
        self._children: dict[StateHash, list[StateHash]] = {}
        self._root: Optional[StateHash] = None
        self.source = source

    @property
    def root(self) -> Optional[StateHash]:
        return self._root

    @property
    def descriptors(self) -> Mapping[StateHash, StateDescriptor]:
        return MappingProxyType(self._descriptors)

    @property
    def nodes(self) -> NodeSet:
        return NodeSet(self, self._descriptors)

    @property
    def edge_count(self) -> int:
        return sum(len(children) for children in self._children.values())

    def __len__(self) -> int:
        return len(self._descriptors)

    def __contains__(self, item: object) -> bool:
        return item in self._descriptors

    def get(self, state_hash: StateHash) -> StateDescriptor:
        try:
            return self._descriptors[state_hash]
        except KeyError:
            raise NodeNotFoundError(f"State {state_hash} is not in the graph") from None

    def children(self, state_hash: StateHash) -> tuple[StateHash, ...]:
        self.get(state_hash)
        return tuple(self._children.get(state_hash, ()))

    def add_node(self, descriptor: StateDescriptor) -> "ExperimentGraph":
        """
        Insert a state. Children are appended to their parent's child list in insertion order.

        Adding a descriptor that is byte-identical to the stored one is a no-op.

        :param descriptor: a valid descriptor whose parent (if any) is already in the graph
        :type descriptor: StateDescriptor
        :raises InvalidGraphError: the descriptor fails `validate_state`
        :raises DuplicateNodeConflictError: same hash, different descriptor
        :raises MultiRootError: a root is added to a graph that already has one
        :raises DanglingEdgeError: the parent is unknown
        :return: the graph itself
        :rtype: ExperimentGraph
        """
        violations = validate_state(descriptor)
        if violations:
            raise InvalidGraphError(f"State {descriptor.hash.short} is invalid", violations)

        existing = self._descriptors.get(descriptor.hash)
        if existing is not None:
            if state_to_json(existing) != state_to_json(descriptor):
                raise DuplicateNodeConflictError(f"State {descriptor.hash.short} is already present with other data")
            return self

        if descriptor.is_root:
            if self._root is not None:
                raise MultiRootError(f"Graph already has root {self._root.short}")
            self._root = descriptor.hash
        elif descriptor.parent_hash not in self._descriptors:
            raise DanglingEdgeError(
                f"Parent {descriptor.parent_hash.short} of state {descriptor.hash.short} is not in the graph"
            )
        else:
            self._children[descriptor.parent_hash].append(descriptor.hash)

        self._descriptors[descriptor.hash] = descriptor
        self._children[descriptor.hash] = []
        return self

    def path_to_root(self, state_hash: StateHash) -> ProvenancePath:
        """
        Provenance of a state: `[(state, recipe), (parent, recipe), ..., (root, None)]`.

        :raises NodeNotFoundError: unknown hash
        :raises InvalidGraphError: the parent chain loops or breaks
        """
        path = []
        seen = set()
        current: Optional[StateHash] = state_hash
        while current is not None:
            if current in seen:
                raise InvalidGraphError(f"Parent chain of {state_hash.short} loops at {current.short}")
            seen.add(current)
            if current not in self._descriptors and path:
                raise InvalidGraphError(f"Parent chain of {state_hash.short} breaks at {current.short}")
            descriptor = self.get(current)
            path.append((descriptor.hash, descriptor.recipe))
            current = descriptor.parent_hash
        return path

    def depth(self, state_hash: StateHash) -> int:
        return len(self.path_to_root(state_hash)) - 1

    def filter(self, tag: str) -> NodeSet:
        return self.nodes.filter(tag)

    def to_networkx(self) -> nx.DiGraph:
        """Directed parent -> child view. Edges to unknown parents are left out."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self._descriptors)
        for descriptor in self._descriptors.values():
            if descriptor.parent_hash is not None and descriptor.parent_hash in self._descriptors:
                graph.add_edge(descriptor.parent_hash, descriptor.hash, recipe=descriptor.recipe_name)
        return graph

    def check_invariants(self) -> list[Violation]:
        """
        Verify single root, connectedness, acyclicity, edge count = N - 1, every descriptor, and that each
        child inherits its parent's properties except those its recipe sets.

        :return: all violations found, empty if the graph is a valid tree
        :rtype: list[Violation]
        """
        if not self._descriptors:
            return [Violation(code=ViolationCode.NO_ROOT, message="graph is empty")]

        violations = []
        roots = sorted(h for h, descriptor in self._descriptors.items() if descriptor.parent_hash is None)
        if not roots:
            violations.append(Violation(code=ViolationCode.NO_ROOT, message="no state without a parent"))
        elif len(roots) > 1:
            for root in roots:
                violations.append(Violation(code=ViolationCode.MULTI_ROOT, hash=root.hex, message="extra root"))

        for state_hash in sorted(self._descriptors):
            parent_hash = self._descriptors[state_hash].parent_hash
            if parent_hash is not None and parent_hash not in self._descriptors:
                violations.append(
                    Violation(
                        code=ViolationCode.DANGLING_EDGE, hash=state_hash.hex, message=f"missing parent {parent_hash}"
                    )
                )

        graph = self.to_networkx()
        in_cycle = set()
        for cycle in nx.simple_cycles(graph):
            in_cycle.update(cycle)
            members = " -> ".join(h.short for h in sorted(cycle))
            violations.append(Violation(code=ViolationCode.CYCLE, hash=min(cycle).hex, message=members))

        if len(roots) == 1:
            reachable = nx.descendants(graph, roots[0]) | {roots[0]}
            for state_hash in sorted(set(self._descriptors) - reachable - in_cycle):
                violations.append(
                    Violation(code=ViolationCode.UNREACHABLE, hash=state_hash.hex, message="not reachable from root")
                )

        if graph.number_of_edges() != len(self._descriptors) - 1:
            violations.append(
                Violation(
                    code=ViolationCode.EDGE_COUNT,
                    message=f"{graph.number_of_edges()} edges for {len(self._descriptors)} states",
                )
            )

        valid = set()
        for state_hash in sorted(self._descriptors):
            own = validate_state(self._descriptors[state_hash])
            violations.extend(own)
            if not own:
                valid.add(state_hash)
        for state_hash in sorted(valid):
            descriptor = self._descriptors[state_hash]
            if descriptor.parent_hash in valid:
                violations.extend(validate_inheritance(self._descriptors[descriptor.parent_hash], descriptor))
        return violations

    def to_dot(self) -> str:
        from recipetree.graph.dot import to_dot

        return to_dot(self)

    draw = to_dot

    def restore_state(self, state_hash: StateHash):
        """Full restore of one state (descriptor and payloads) from the store the graph was loaded from."""
        self.get(state_hash)
        if self.source is None:
            raise StoreError("This graph is not backed by a store")
        return self.source.restore_state_full(state_hash)
