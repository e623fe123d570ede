import logging

from src.exceptions import PreconditionError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import EdgePoint, Point, VertexClass, VertexKind, project
from src.geodesy.distance import bfs_distances, distance
from src.geodesy.label_diff import label_diff
from src.walks.lemma_walks import ascend_from_socket, descend_to_socket, gluing_walk
from src.walks.walk import Piece, Walk, WalkBuilder, concat, reverse

logger = logging.getLogger(__name__)


def anchor_vertex(x: Point, toward: Point) -> VertexClass:
    """Vertex within distance < 1 of x, on the side of `toward` when x is inside an edge."""
    if isinstance(x, EdgePoint):
        return x.edge.right if project(toward) > x.position else x.edge.left
    return x


def gw_part1(truncation: GraphTruncation, x: VertexClass, y: VertexClass) -> Walk:
    """Good walk sweeping the differing entries k_0 < ... < k_q of N(x, y) upwards.

    At each k, a gluing walk and one step fix lambda(k) when theta(k) agrees,
    otherwise a descent to a socket of order k and an ascent fix both entries.
    The vertex where entry k changes is marked s_k.
    """
    if x.m > y.m:
        return reverse(gw_part1(truncation, y, x))
    diff = label_diff(truncation, x, y)
    lam, theta = diff.x_labels
    lam_y, theta_y = diff.y_labels
    walk = Walk.single(x)
    for k in diff.nset:
        if theta.at(k) == theta_y.at(k):
            down = gluing_walk(truncation, walk.end, k, 1, lam, theta)
            lam = lam.with_entry(k, lam_y.at(k))
            builder = WalkBuilder(truncation, down.end, lam, theta)
            builder.step(1)
            up = builder.build()
            kind = "glue"
        else:
            down = descend_to_socket(truncation, walk.end, k, 1, lam, theta)
            lam = lam.with_entry(k, lam_y.at(k))
            theta = theta.with_entry(k, theta_y.at(k))
            up = ascend_from_socket(truncation, down.end, k, 1, lam, theta)
            kind = "neck"
        piece = concat(down.prefixed(f"k{k}.down."), up.prefixed(f"k{k}.up."))
        piece = piece.with_markers({f"s_{k}": down.length}).with_pieces(
            [Piece(kind, 0, piece.length, k, down.length)])
        walk = concat(walk, piece)
    builder = WalkBuilder(truncation, walk.end, lam, theta)
    builder.walk_to(y.m)
    tail = builder.build()
    walk = concat(walk, tail.with_pieces([Piece("line", 0, tail.length, 0)]) if tail.length else tail)
    if walk.end != y:
        raise PreconditionError(f"good walk from {x.key()} ended at {walk.end.key()} instead of {y.key()}")
    return walk


def find_distinguished_socket(truncation: GraphTruncation, x: VertexClass, y: VertexClass) -> VertexClass:
    """Point of order kmax nearest to x through which the kmax entries can switch; least key on ties."""
    diff = label_diff(truncation, x, y)
    kmax = diff.kmax
    theta_change = diff.theta_differs(kmax)
    d = distance(truncation, x, y)
    dist = bfs_distances(truncation, x, radius=int(d) + 1)
    lam_x, theta_x = diff.x_labels
    candidates = []
    for v, dv in dist.items():
        if v.order != kmax or v.kind is VertexKind.PLAIN:
            continue
        if theta_change and v.kind is not VertexKind.SOCKET:
            continue
        if not (v.lam.agrees_beyond(lam_x, kmax) and v.theta.agrees_beyond(theta_x, kmax)):
            continue
        candidates.append((dv, v.sort_key(), v))
    if not candidates:
        raise PreconditionError(f"no point of order {kmax} within {d} of {x.key()} can switch the labels towards {y.key()}")
    return min(candidates)[2]


def gw_part2(truncation: GraphTruncation, x: VertexClass, y: VertexClass) -> Walk:
    """Good walk W_x * W_y through the distinguished point u of order kmax, marked u_kmax."""
    u = find_distinguished_socket(truncation, x, y)
    w_x = gw_part1(truncation, x, u).prefixed("x.")
    w_y = gw_part1(truncation, u, y).prefixed("y.")
    walk = concat(w_x, w_y)
    logger.debug(f"gw_part2 via {u.key()}: {w_x.length} + {w_y.length} steps")
    return walk.with_markers({"u_kmax": w_x.length})


def good_walk(truncation: GraphTruncation, x: Point, y: Point) -> Walk:
    d = distance(truncation, x, y)
    if d <= 1:
        raise PreconditionError(f"good walks need d(x, y) > 1, got {d}")
    wx = anchor_vertex(x, y)
    wy = anchor_vertex(y, x)
    diff = label_diff(truncation, wx, wy)
    if truncation.scales.disc_log(d) >= diff.kmax:
        return gw_part1(truncation, wx, wy)
    return gw_part2(truncation, wx, wy)
