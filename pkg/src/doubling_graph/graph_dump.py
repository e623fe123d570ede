import logging
import re

from dataclasses import dataclass
from pathlib import Path
from typing import List, TextIO, Tuple

from src.consts import DUMP_FORMAT_VERSION
from src.exceptions import ConfigError
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^# doubling-graph v(\d+) depth=(\d+) window=(-?\d+),(-?\d+)$")


@dataclass
class GraphSnapshot:
    depth: int
    window: Tuple[int, int]
    vertices: List[Tuple[int, Label, Label, str, int]]
    edges: List[Tuple[int, Label, Label]]


def dump_truncation(truncation: GraphTruncation, stream: TextIO) -> None:
    """Write the line-oriented dump: header, then V records, then E records, each sorted."""
    truncation.freeze()
    stream.write(f"# doubling-graph v{DUMP_FORMAT_VERSION} depth={truncation.depth} "
                 f"window={truncation.m_lo},{truncation.m_hi}\n")
    for v in truncation.known_vertices():
        stream.write(f"V\t{v.m}\t{v.lam.key()}\t{v.theta.key()}\t{v.kind.value}\t{v.order}\n")
    for e in truncation.known_edges():
        stream.write(f"E\t{e.m}\t{e.lam.key()}\t{e.theta.key()}\n")


def load_dump(file_path: Path) -> GraphSnapshot:
    with open(file_path) as dump_file:
        header = dump_file.readline().rstrip("\n")
        match = _HEADER.match(header)
        if not match:
            raise ConfigError(f"{file_path}: not a doubling-graph dump (header {header!r})")
        if int(match.group(1)) != DUMP_FORMAT_VERSION:
            raise ConfigError(f"{file_path}: unsupported dump version {match.group(1)}")
        snapshot = GraphSnapshot(
            depth=int(match.group(2)),
            window=(int(match.group(3)), int(match.group(4))),
            vertices=[],
            edges=[],
        )
        for line_no, line in enumerate(dump_file, start=2):
            fields = line.rstrip("\n").split("\t")
            if fields[0] == "V" and len(fields) == 6:
                snapshot.vertices.append(
                    (int(fields[1]), Label.parse(fields[2]), Label.parse(fields[3]), fields[4], int(fields[5])))
            elif fields[0] == "E" and len(fields) == 4:
                snapshot.edges.append((int(fields[1]), Label.parse(fields[2]), Label.parse(fields[3])))
            else:
                raise ConfigError(f"{file_path}:{line_no}: malformed record {line!r}")
    logger.info(f"Loaded dump with {len(snapshot.vertices)} vertices and {len(snapshot.edges)} edges")
    return snapshot
