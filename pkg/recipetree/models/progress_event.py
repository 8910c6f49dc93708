from enum import Enum


class ProgressEvent(Enum):
    """
    ProgressEvent enum contains the kinds of progress lines the executor writes for each plan node.
    """

    EXEC = "EXEC"
    CACHE = "CACHE"
    FUNC = "FUNC"
    FAIL = "FAIL"
