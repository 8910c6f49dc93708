from recipetree.utils.cli import ls_line, show_lines
from tests.toy_recipes import make_child, make_root


def test_ls_line():
    root = make_root(tags={"b", "a"})
    assert ls_line(root) == f"{root.hash.short} ROOT tags=a,b"
    child = make_child(root, "TrainRecipe", {"lr": 0.1})
    assert ls_line(child) == f"{child.hash.short} TrainRecipe tags="


def test_show_lines():
    root = make_root(attributes=("weights",))
    child = make_child(root, "TrainRecipe", {"lr": 0.1}, tags={"lr:0.1"})
    lines = show_lines(child, {"weights": 88}, [(child.hash, child.recipe), (root.hash, None)])
    assert lines == [
        f"hash: {child.hash.hex}",
        f"parent: {root.hash.hex}",
        'recipe: TrainRecipe {"lr": 0.1}',
        "tags: lr:0.1",
        "properties:",
        "  lr: 0.1",
        '  name: "root"',
        "payloads:",
        "  weights: 88 bytes",
        "provenance (2):",
        f"  {child.hash.short} TrainRecipe",
        f"  {root.hash.short} ROOT",
    ]
