from recipetree.graph.experiment_graph import ExperimentGraph  # noqa: F401
from recipetree.graph.node_set import NodeSet, nodeset_algebra  # noqa: F401
