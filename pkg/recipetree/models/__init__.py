from recipetree.models.execution_mode import ExecutionMode  # noqa: F401
from recipetree.models.progress_event import ProgressEvent  # noqa: F401
from recipetree.models.state_status import StateStatus  # noqa: F401
from recipetree.models.violation import Violation, ViolationCode  # noqa: F401
