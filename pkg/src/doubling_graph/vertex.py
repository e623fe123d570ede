from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Tuple, Union

from src.graph_params.symbols import Label


class VertexKind(str, Enum):
    PLAIN = "plain"
    GLUING = "gluing"
    SOCKET = "socket"


@dataclass(frozen=True)
class VertexClass:
    """Class of line-coordinates (m, lam, theta) under the gluing/socket identifications.

    Forgotten entries are stored as the wildcard symbol, so equality of classes is
    equality of (m, lam, theta).
    """
    m: int
    lam: Label
    theta: Label
    kind: VertexKind = field(compare=False)
    order: int = field(compare=False)

    def sort_key(self) -> Tuple:
        return self.m, tuple(self.lam), tuple(self.theta)

    def key(self) -> str:
        return f"{self.m}|{self.lam.key()}|{self.theta.key()}"

    def __lt__(self, other: "VertexClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"V({self.key()}:{self.kind.value}{self.order})"


@dataclass(frozen=True)
class Edge:
    """Unit edge [m, m+1] on the line (lam, theta); all interior points carry these labels."""
    m: int
    lam: Label
    theta: Label
    left: VertexClass = field(compare=False, repr=False)
    right: VertexClass = field(compare=False, repr=False)

    def sort_key(self) -> Tuple:
        return self.m, tuple(self.lam), tuple(self.theta)

    def key(self) -> str:
        return f"{self.m}|{self.lam.key()}|{self.theta.key()}"

    def __lt__(self, other: "Edge") -> bool:
        return self.sort_key() < other.sort_key()

    def other(self, v: VertexClass) -> VertexClass:
        if v == self.left:
            return self.right
        if v == self.right:
            return self.left
        raise ValueError(f"{v!r} is not an endpoint of edge {self.key()}")

    @property
    def midpoint(self) -> Fraction:
        return Fraction(2 * self.m + 1, 2)


@dataclass(frozen=True)
class EdgePoint:
    """Interior point of an edge at parameter offset in (0, 1) from the left endpoint."""
    edge: Edge
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not 0 < self.offset < 1:
            raise ValueError(f"edge offsets lie in (0, 1), got {self.offset}")

    @property
    def position(self) -> Fraction:
        return self.edge.m + self.offset

    def key(self) -> str:
        return f"{self.edge.key()}+{self.offset}"


Point = Union[VertexClass, EdgePoint]


def project(x: Point) -> Fraction:
    if isinstance(x, EdgePoint):
        return x.position
    return Fraction(x.m)
