from abc import ABC, abstractmethod
from typing import Any, Dict


class ParamsReader(ABC):
    @abstractmethod
    def read_raw(self) -> Dict[str, Any]:
        ...
