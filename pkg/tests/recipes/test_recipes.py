import pytest
from pydantic import ValidationError

from recipetree.recipes import StateContents, StateInitializer, StateView
from recipetree.recipes.contents import check_payload_name
from tests.toy_recipes import AppendRecipe, ConstantInitializer, make_root


class MissingPayloadInitializer(StateInitializer):
    NONHASHED_ATTRIBUTES = ("weights",)

    def initialize_state(self, properties):
        return StateContents()


@pytest.mark.parametrize("name", ["", ".hidden", "a/b", "a\\b", "tab\there"])
def test_invalid_payload_names(name):
    with pytest.raises(ValueError):
        check_payload_name(name)


def test_contents_reject_bad_properties():
    with pytest.raises(ValidationError):
        StateContents(properties={"x": float("nan")})
    with pytest.raises(ValidationError):
        StateContents(payloads={"../x": b""})


def test_initializer_must_produce_its_payloads():
    with pytest.raises(ValueError):
        MissingPayloadInitializer()()
    assert ConstantInitializer({"name": "x"})().payloads == {"blob": b"x"}


def test_initializer_properties_are_checked():
    with pytest.raises(ValueError):
        ConstantInitializer({1: "x"})


def test_recipe_descriptor():
    recipe = AppendRecipe("-a")
    assert recipe.name == "AppendRecipe"
    assert recipe.descriptor.properties == {"suffix": "-a"}
    assert repr(recipe) == "AppendRecipe({'suffix': '-a'})"


def test_view_is_read_only_and_isolated():
    root = make_root({"nested": {"a": [1, 2]}})
    first = StateView(root, {"blob": b"x"})
    second = StateView(root, {"blob": b"x"})
    with pytest.raises(TypeError):
        first.payloads["blob"] = b"y"
    first.properties["nested"]["a"].append(3)
    assert second.properties["nested"]["a"] == [1, 2]
    assert root.properties["nested"]["a"] == [1, 2]
    with pytest.raises(KeyError):
        first.payload("missing")
