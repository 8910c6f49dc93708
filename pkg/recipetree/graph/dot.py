from typing import TYPE_CHECKING

from recipetree.errors import InvalidGraphError

if TYPE_CHECKING:
    from recipetree.graph.experiment_graph import ExperimentGraph


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def to_dot(graph: "ExperimentGraph") -> str:
    """
    Render the experiment tree as a Graphviz DOT digraph.

    Nodes are labelled with the 8-char hash prefix and their sorted tags, edges with the recipe name.
    Statements are emitted in ascending hash order, so equal graphs give byte-equal text.

    :raises InvalidGraphError: the graph fails `check_invariants`
    """
    violations = graph.check_invariants()
    if violations:
        raise InvalidGraphError(f"Cannot draw an invalid graph ({len(violations)} violations)", violations)

    lines = ["digraph experiment {", "  node [shape=box];"]
    ordered = sorted(graph.descriptors.values(), key=lambda descriptor: descriptor.hash)
    for descriptor in ordered:
        label = descriptor.hash.short
        if descriptor.tags:
            label += "\n" + ", ".join(sorted(descriptor.tags))
        lines.append(f"  {_quote(descriptor.hash.hex)} [label={_quote(label)}];")
    for descriptor in ordered:
        if descriptor.parent_hash is not None:
            edge = f"{_quote(descriptor.parent_hash.hex)} -> {_quote(descriptor.hash.hex)}"
            lines.append(f"  {edge} [label={_quote(descriptor.recipe.name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
