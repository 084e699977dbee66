"""hypergraphs.reduction

Bounded-degree reduction. Every vertex v is split into a cloud of
max(1, ceil(d_v / ceil(d_avg))) vertices and its incidences are dealt to the
cloud round-robin in edge order, so no reduced vertex has degree above
ceil(d_avg). Edges keep their index: edge i of the reduced instance is the
image of edge i of the original one.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInstanceError, UnknownEdgeError
from .structures import Graph, Hypergraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CloudMapping:
    original_n: int
    degree_cap: int
    cloud_sizes: np.ndarray
    cloud_offsets: np.ndarray
    origin_of: np.ndarray
    edge_map: np.ndarray

    @property
    def reduced_n(self):
        return int(self.origin_of.shape[0])

    def cloud_of(self, vertex):
        start = int(self.cloud_offsets[vertex])
        return list(range(start, start + int(self.cloud_sizes[vertex])))

    def lift_set(self, vertices):
        """The union of the clouds of the given original vertices."""
        return [u for v in vertices for u in self.cloud_of(v)]

    @property
    def is_identity(self):
        return bool(np.all(self.cloud_sizes == 1))


def _incidence_counts(n, incidences):
    counts = np.zeros(n, dtype=np.int64)
    for members in incidences:
        for v in members:
            counts[v] += 1
    return counts


def _build_clouds(n, incidences):
    """Cloud layout plus the reduced endpoint lists of every (hyper)edge."""
    if n == 0:
        raise InvalidInstanceError("cannot reduce an instance without vertices")
    counts = _incidence_counts(n, incidences)
    cap = math.ceil(counts.sum() / n)
    if cap == 0:
        sizes = np.ones(n, dtype=np.int64)
    else:
        sizes = np.maximum(1, -(-counts // cap))
    offsets = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
    origin_of = np.repeat(np.arange(n, dtype=np.int64), sizes)
    dealt = np.zeros(n, dtype=np.int64)
    reduced = []
    for members in incidences:
        row = []
        for v in members:
            row.append(int(offsets[v] + dealt[v] % sizes[v]))
            dealt[v] += 1
        reduced.append(row)
    mapping = CloudMapping(
        original_n=n,
        degree_cap=int(cap),
        cloud_sizes=sizes,
        cloud_offsets=offsets,
        origin_of=origin_of,
        edge_map=np.arange(len(incidences), dtype=np.int64),
    )
    logger.debug(
        "Reduced %d vertices to %d with degree cap %d", n, mapping.reduced_n, cap
    )
    return reduced, mapping


def reduce_graph(graph):
    """(G', mapping) with every vertex of G' of degree at most ceil(d_avg)."""
    reduced, mapping = _build_clouds(graph.n, graph.edges.tolist())
    return Graph(mapping.reduced_n, np.array(reduced, dtype=np.int64).reshape(-1, 2), graph.weights), mapping


def reduce_hypergraph(hypergraph):
    """Hypergraph version of reduce_graph; d_avg counts incidences."""
    reduced, mapping = _build_clouds(hypergraph.n, hypergraph.hyperedges)
    return Hypergraph(mapping.reduced_n, reduced, hypergraph.weights), mapping


def lift_edges(mapping, reduced_indices):
    """Original edge indices of a multiset of reduced edge indices."""
    reduced_indices = np.asarray(reduced_indices, dtype=np.int64).reshape(-1)
    size = mapping.edge_map.shape[0]
    if reduced_indices.size and (reduced_indices.min() < 0 or reduced_indices.max() >= size):
        bad = reduced_indices[(reduced_indices < 0) | (reduced_indices >= size)]
        raise UnknownEdgeError(f"edge index {int(bad[0])} is not in the reduced instance")
    return mapping.edge_map[reduced_indices]


def lift_vector(mapping, x):
    """x' with x'_u = x_v for every u in the cloud of v."""
    x = np.asarray(x, dtype=float)
    if x.shape != (mapping.original_n,):
        raise InvalidInstanceError(
            f"vector has shape {x.shape}, expected ({mapping.original_n},)"
        )
    return x[mapping.origin_of]
