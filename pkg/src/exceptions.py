from typing import Iterable, List, Optional


class DoublingGraphError(Exception):
    """Base class for every error raised by the library."""


class ConfigError(DoublingGraphError):
    pass


class WindowError(DoublingGraphError):
    """A position fell outside the truncation window, or a target was unreachable inside it."""


class DepthError(DoublingGraphError):
    """A label has support beyond the truncation depth."""


class PreconditionError(DoublingGraphError):
    def __init__(self, message: str, failures: Optional[Iterable[str]] = None):
        self.failures: List[str] = list(failures or [])
        if self.failures:
            message = f"{message}: " + "; ".join(self.failures)
        super().__init__(message)


class LiftError(DoublingGraphError):
    pass


class LawMismatchError(DoublingGraphError):
    pass


class SupportError(DoublingGraphError):
    """A curve charges edges where the reference measure vanishes."""


class ConvergenceError(DoublingGraphError):
    def __init__(self, message: str, gap: float = float("inf")):
        self.gap = gap
        super().__init__(f"{message} (gap={gap:.3e})")


class DisconnectedError(DoublingGraphError):
    pass
