from enum import Enum


class StateStatus(Enum):
    """
    StateStatus enum describes what the store holds for a hash. Only COMPLETE states are cache hits.
    """

    MISSING = "missing"
    INCOMPLETE = "incomplete"
    CORRUPT = "corrupt"
    COMPLETE = "complete"
