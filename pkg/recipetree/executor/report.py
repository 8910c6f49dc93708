from pydantic import BaseModel, ConfigDict

from recipetree.core.hashing import StateHash


class RunReport(BaseModel):
    """
    Outcome of one run. Every plan node lands in exactly one of `executed`, `cache_hits`, `failed` or `blocked`.
    Lists follow plan order.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    executed: list[StateHash] = []
    cache_hits: list[StateHash] = []
    failed: list[StateHash] = []
    blocked: list[StateHash] = []
    nondeterministic: list[StateHash] = []
    function_invocations: dict[StateHash, int] = {}
    function_errors: dict[StateHash, list[str]] = {}
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.failed or self.blocked or self.nondeterministic or self.function_errors)

    def summary(self) -> str:
        text = f"executed={len(self.executed)} cached={len(self.cache_hits)}"
        if self.failed or self.blocked:
            text += f" failed={len(self.failed)} blocked={len(self.blocked)}"
        return text
