import json
from typing import Any, Iterable

from rich.console import Console
from rich.markup import escape

from recipetree.core.descriptors import StateDescriptor
from recipetree.graph.experiment_graph import ProvenancePath

console = Console(stderr=True)


def print_error(message: str, details: Iterable[Any] = ()):
    console.print(f"❌ [bold red]{escape(str(message))}[/bold red]")
    for detail in details:
        console.print(f"   {escape(str(detail))}")


def _value(value: Any) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


def ls_line(descriptor: StateDescriptor) -> str:
    return f"{descriptor.hash.short} {descriptor.recipe_name or 'ROOT'} tags={','.join(sorted(descriptor.tags))}"


def show_lines(descriptor: StateDescriptor, payload_sizes: dict[str, int], provenance: ProvenancePath) -> list[str]:
    """Text of `rt show`: identity, recipe, tags, properties, payload sizes and the path back to the root."""
    lines = [f"hash: {descriptor.hash.hex}", f"parent: {descriptor.parent_hash or '-'}"]
    if descriptor.recipe is None:
        lines.append("recipe: ROOT")
    else:
        lines.append(f"recipe: {descriptor.recipe.name} {_value(descriptor.recipe.properties)}")
    lines.append(f"tags: {', '.join(sorted(descriptor.tags))}")
    lines.append("properties:")
    lines.extend(f"  {key}: {_value(descriptor.properties[key])}" for key in sorted(descriptor.properties))
    lines.append("payloads:")
    lines.extend(f"  {name}: {payload_sizes[name]} bytes" for name in sorted(payload_sizes))
    lines.append(f"provenance ({len(provenance)}):")
    lines.extend(f"  {state_hash.short} {recipe.name if recipe else 'ROOT'}" for state_hash, recipe in provenance)
    return lines
