from typing import TYPE_CHECKING, Iterable, Iterator, Literal

from recipetree.core.hashing import StateHash
from recipetree.errors import CrossGraphError, NodeNotFoundError

if TYPE_CHECKING:
    from recipetree.core.descriptors import StateDescriptor
    from recipetree.graph.experiment_graph import ExperimentGraph

SetOperation = Literal["intersect", "union", "difference"]


class NodeSet:
    """
    An immutable set of state hashes bound to one `ExperimentGraph`.

    Iteration and indexing follow ascending hash text, so `nodes.filter("pruned")[0]` is deterministic.
    Sets compose with `&`, `|` and `-`.
    """

    def __init__(self, graph: "ExperimentGraph", members: Iterable[StateHash] = ()):
        members = frozenset(members)
        for member in members:
            if member not in graph:
                raise NodeNotFoundError(f"State {member.short} is not in the graph")
        self._graph = graph
        self._members = members
        self._ordered = sorted(members)

    @property
    def graph(self) -> "ExperimentGraph":
        return self._graph

    def __iter__(self) -> Iterator[StateHash]:
        return iter(self._ordered)

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def __getitem__(self, index: int) -> StateHash:
        return self._ordered[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NodeSet):
            return NotImplemented
        return self._graph is other._graph and self._members == other._members

    def __hash__(self) -> int:
        return hash((id(self._graph), self._members))

    def __repr__(self) -> str:
        return f"NodeSet({[member.short for member in self._ordered]})"

    def _check_same_graph(self, other: "NodeSet"):
        if not isinstance(other, NodeSet):
            raise TypeError(f"Expected a NodeSet, got {type(other).__name__}")
        if other._graph is not self._graph:
            raise CrossGraphError("Cannot combine node sets from different graphs")

    def intersect(self, other: "NodeSet") -> "NodeSet":
        self._check_same_graph(other)
        return NodeSet(self._graph, self._members & other._members)

    def union(self, other: "NodeSet") -> "NodeSet":
        self._check_same_graph(other)
        return NodeSet(self._graph, self._members | other._members)

    def difference(self, other: "NodeSet") -> "NodeSet":
        self._check_same_graph(other)
        return NodeSet(self._graph, self._members - other._members)

    __and__ = intersect
    __or__ = union
    __sub__ = difference

    def filter(self, tag: str) -> "NodeSet":
        """Members carrying `tag`. Exact, case-sensitive match."""
        return NodeSet(self._graph, (h for h in self._members if tag in self._graph.get(h).tags))

    def descriptors(self) -> list["StateDescriptor"]:
        return [self._graph.get(h) for h in self._ordered]

    def restore(self, index: int = 0):
        """Fully restore the `index`-th member (descriptor and payloads) from the graph's store."""
        return self._graph.restore_state(self[index])


def nodeset_algebra(a: NodeSet, b: NodeSet, op: SetOperation) -> NodeSet:
    operations = {"intersect": NodeSet.intersect, "union": NodeSet.union, "difference": NodeSet.difference}
    if op not in operations:
        raise ValueError(f"Unknown set operation {op!r}. Choose one of {sorted(operations)}")
    return operations[op](a, b)
