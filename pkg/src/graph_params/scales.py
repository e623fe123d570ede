from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

from src.exceptions import ConfigError

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class ScaleTable:
    """Scales sigma_k = m_1 * ... * m_k.

    An explicit list of m_k repeats its last entry past its length, so sigma(k)
    is defined for every k and ord/disc_log are exact for every integer.
    """
    N: int
    m: Tuple[int, ...]
    constant: bool = False
    _sigmas: List[int] = field(default_factory=lambda: [1], compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        if self.N < 2:
            raise ConfigError(f"N must be at least 2, got {self.N}")
        if not self.m:
            raise ConfigError("the m_k sequence is empty")
        for k, mk in enumerate(self.m, start=1):
            if not 2 <= mk <= self.N:
                raise ConfigError(f"m_{k}={mk} violates 2 <= m_k <= N={self.N}")

    @classmethod
    def constant_m(cls, m: int, N: int | None = None) -> "ScaleTable":
        return cls(N=N if N is not None else m, m=(m,), constant=True)

    def m_at(self, k: int) -> int:
        return self.m[k - 1] if k <= len(self.m) else self.m[-1]

    def sigma(self, k: int) -> int:
        if k < 0:
            raise ValueError(f"scales are indexed from 0, got {k}")
        while len(self._sigmas) <= k:
            self._sigmas.append(self._sigmas[-1] * self.m_at(len(self._sigmas)))
        return self._sigmas[k]

    def ord(self, m: int) -> int:
        if m == 0:
            return 0
        m = abs(m)
        k = 0
        while m % self.sigma(k + 1) == 0:
            k += 1
        return k

    def disc_log(self, p: Number) -> int:
        if p < 0:
            raise ValueError(f"disc_log needs p >= 0, got {p}")
        k = 0
        while self.sigma(k + 1) <= p:
            k += 1
        return k

    def max_order_in(self, lo: Number, hi: Number) -> Tuple[int, int | None]:
        """Highest order among the nonzero integers of [lo, hi], with the integer attaining it."""
        best, where = 0, None
        k = 0
        while True:
            s = self.sigma(k + 1)
            first = -((-Fraction(lo)) // s) * s
            candidates = [n for n in (first, first + s) if n <= hi and n != 0]
            if not candidates:
                break
            k += 1
            best, where = k, int(candidates[0])
        if where is None:
            for n in range(int(-((-Fraction(lo)) // 1)), int(Fraction(hi) // 1) + 1):
                if n != 0:
                    where = n
                    break
        return best, where
