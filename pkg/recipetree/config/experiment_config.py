from typing import Any, Optional

from recipetree.config.base_config import BaseConfig
from recipetree.config.executor_config import ExecutorConfig
from recipetree.constants import LOG_LEVEL


class ExperimentConfig(BaseConfig):
    """
    Config for an `Experiment`.

    :param log_level: Debug level ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], defaults to `RECIPETREE_LOG_LEVEL`
    or "WARNING"
    :type log_level: str, optional
    :param executor: executor settings used by `Experiment.run`, defaults to a single-threaded executor
    :type executor: ExecutorConfig, optional
    """

    def __init__(self, log_level: str = LOG_LEVEL, executor: Optional[ExecutorConfig] = None):
        self.log_level = log_level
        self.executor = executor or ExecutorConfig()

    @staticmethod
    def from_config(config: Optional[dict[str, Any]]):
        if config is None:
            return ExperimentConfig()
        experiment = config.get("experiment", {})
        return ExperimentConfig(
            log_level=experiment.get("log_level", LOG_LEVEL),
            executor=ExecutorConfig.from_config(config.get("executor")),
        )
