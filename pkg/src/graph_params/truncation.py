from dataclasses import dataclass
from typing import Tuple

from src.exceptions import ConfigError
from src.graph_params.scales import ScaleTable


@dataclass(frozen=True)
class TruncationSpec:
    depth: int
    window: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "window", (int(self.window[0]), int(self.window[1])))
        if self.depth < 1:
            raise ConfigError(f"depth must be at least 1, got {self.depth}")
        if self.window[0] >= self.window[1]:
            raise ConfigError(f"window {self.window} is empty")

    def validate(self, scales: ScaleTable) -> None:
        lo, hi = self.window
        if hi - lo < 2 * scales.sigma(self.depth):
            raise ConfigError(
                f"window [{lo}, {hi}] is narrower than 2*sigma_{self.depth}={2 * scales.sigma(self.depth)}")

    def contains(self, m: int) -> bool:
        return self.window[0] <= m <= self.window[1]
