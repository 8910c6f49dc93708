from recipetree.recipes.contents import StateContents, StateView  # noqa: F401
from recipetree.recipes.function import Function  # noqa: F401
from recipetree.recipes.initializer import StateInitializer  # noqa: F401
from recipetree.recipes.recipe import Recipe  # noqa: F401
