import importlib
from typing import Any, Optional, Union

from recipetree.config.executor_config import ExecutorConfig
from recipetree.models.execution_mode import ExecutionMode


def load_class(class_type):
    module_path, class_name = class_type.rsplit(".", 1)
    module = importlib.import_module(module_path)
    return getattr(module, class_name)


class ExecutorFactory:
    mode_to_class = {
        "single_threaded": "recipetree.executor.single_threaded.SingleThreadedExecutor",
        "multi_threaded": "recipetree.executor.multi_threaded.MultiThreadedExecutor",
    }

    @classmethod
    def create(cls, mode: Union[str, ExecutionMode], config_data: Optional[dict[str, Any]] = None):
        mode_name = mode.value if isinstance(mode, ExecutionMode) else mode
        class_type = cls.mode_to_class.get(mode_name)
        if class_type:
            executor_class = load_class(class_type)
            return executor_class(config=ExecutorConfig(mode=mode_name, **(config_data or {})))
        else:
            raise ValueError(f"Unsupported execution mode: {mode}")

    @classmethod
    def from_config(cls, config: ExecutorConfig):
        options = {key: value for key, value in config.as_dict().items() if key != "mode"}
        return cls.create(config.mode, options)
