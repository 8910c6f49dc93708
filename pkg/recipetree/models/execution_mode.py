from enum import Enum


class ExecutionMode(Enum):
    """
    ExecutionMode enum contains the supported ways of running an execution plan.
    Multi-process and distributed backends plug into the same plan abstraction through the executor factory.
    """

    SINGLE_THREADED = "single_threaded"
    MULTI_THREADED = "multi_threaded"
