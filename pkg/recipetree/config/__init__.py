# flake8: noqa: F401

from .base_config import BaseConfig
from .demo_config import DemoConfig
from .executor_config import ExecutorConfig
from .experiment_config import ExperimentConfig
