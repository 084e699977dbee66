"""hypergraphs.structures

Immutable graph and hypergraph instances and the cut functionals defined on
them. Vertices are the integers 0..n-1. Edge multisets are kept as arrays so
that sparsifier outputs (index arrays into an edge list, repeats allowed) can
be turned back into instances with ``Graph.select``.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import InvalidInstanceError

logger = logging.getLogger(__name__)

# vectors per block in hypergraph_quadratic_batch
QUADRATIC_BATCH_BLOCK = 1024


def _frozen(array):
    array.setflags(write=False)
    return array


def _check_weights(weights, count, what):
    if weights is None:
        return np.ones(count, dtype=float)
    weights = np.array(weights, dtype=float).reshape(-1)
    if weights.shape[0] != count:
        raise InvalidInstanceError(
            f"{what} has {count} entries but {weights.shape[0]} weights"
        )
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise InvalidInstanceError(f"{what} weights must be finite and nonnegative")
    return weights


def vertex_mask(n, vertices):
    """Boolean membership mask of a vertex set, validating every index."""
    mask = np.zeros(n, dtype=bool)
    indices = np.fromiter((int(v) for v in vertices), dtype=np.int64)
    if indices.size:
        if indices.min() < 0 or indices.max() >= n:
            raise InvalidInstanceError(
                f"vertex index out of range [0, {n}) in {sorted(set(indices.tolist()))}"
            )
        mask[indices] = True
    return mask


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected multigraph on n vertices.

    ``edges`` is an (m, 2) integer array with a < b in every row, ``weights``
    a length-m array (all ones when omitted). ``provenance`` optionally maps
    each edge to the hyperedge it was expanded from.
    """
    n: int
    edges: np.ndarray
    weights: np.ndarray = None
    provenance: np.ndarray = None

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise InvalidInstanceError("vertex count must be nonnegative")
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise InvalidInstanceError(f"edge endpoint out of range [0, {n})")
        if np.any(edges[:, 0] == edges[:, 1]):
            row = int(np.flatnonzero(edges[:, 0] == edges[:, 1])[0])
            raise InvalidInstanceError(f"self-loop at edge {row}")
        edges = np.sort(edges, axis=1)
        weights = _check_weights(self.weights, edges.shape[0], "edge list")
        provenance = self.provenance
        if provenance is not None:
            provenance = np.array(provenance, dtype=np.int64).reshape(-1)
            if provenance.shape[0] != edges.shape[0]:
                raise InvalidInstanceError("provenance must have one entry per edge")
            provenance = _frozen(provenance)
        object.__setattr__(self, 'n', n)
        object.__setattr__(self, 'edges', _frozen(edges))
        object.__setattr__(self, 'weights', _frozen(weights))
        object.__setattr__(self, 'provenance', provenance)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, weighted={not self.is_unweighted})"

    @property
    def m(self):
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self):
        """Weighted degree of every vertex."""
        return _frozen(
            np.bincount(self.edges.ravel(), weights=np.repeat(self.weights, 2), minlength=self.n)
        )

    @property
    def d_max(self):
        return float(self.degrees.max()) if self.n else 0.0

    @property
    def d_avg(self):
        return float(self.degrees.sum() / self.n) if self.n else 0.0

    @property
    def total_weight(self):
        return float(self.weights.sum())

    @property
    def is_unweighted(self):
        return bool(np.all(self.weights == 1.0))

    @property
    def is_simple(self):
        return np.unique(self.edges, axis=0).shape[0] == self.m

    @cached_property
    def adjacency_lists(self):
        """Sorted distinct neighbours per vertex."""
        neighbours = [set() for _ in range(self.n)]
        for a, b in self.edges.tolist():
            neighbours[a].add(b)
            neighbours[b].add(a)
        return tuple(tuple(sorted(nbrs)) for nbrs in neighbours)

    def select(self, indices):
        """The multiset of edges at ``indices`` (repeats allowed) as a Graph."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        if indices.size and (indices.min() < 0 or indices.max() >= self.m):
            raise InvalidInstanceError(f"edge index out of range [0, {self.m})")
        provenance = None if self.provenance is None else self.provenance[indices]
        return Graph(self.n, self.edges[indices], self.weights[indices], provenance)

    def scaled(self, factor):
        return Graph(self.n, self.edges, self.weights * float(factor), self.provenance)

    def quadratic_form(self, x):
        """Edgewise sum of w (x_a - x_b)^2."""
        x = _check_vector(self.n, x)
        gaps = x[self.edges[:, 0]] - x[self.edges[:, 1]]
        return float(np.dot(self.weights, gaps * gaps))


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """
    Weighted hypergraph on n vertices.

    Hyperedges are stored as sorted vertex tuples. Hyperedges with fewer
    than two vertices are dropped at construction.
    """
    n: int
    hyperedges: tuple
    weights: np.ndarray = None

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise InvalidInstanceError("vertex count must be nonnegative")
        raw = [tuple(int(v) for v in e) for e in self.hyperedges]
        weights = _check_weights(self.weights, len(raw), "hyperedge list")
        kept, kept_weights, dropped = [], [], 0
        for index, (members, weight) in enumerate(zip(raw, weights)):
            if len(set(members)) != len(members):
                raise InvalidInstanceError(f"hyperedge {index} repeats a vertex: {members}")
            if any(v < 0 or v >= n for v in members):
                raise InvalidInstanceError(
                    f"hyperedge {index} has a vertex outside [0, {n}): {members}"
                )
            if len(members) < 2:
                dropped += 1
                continue
            kept.append(tuple(sorted(members)))
            kept_weights.append(weight)
        if dropped:
            logger.warning("Dropped %d hyperedge(s) with fewer than two vertices", dropped)
        object.__setattr__(self, 'n', n)
        object.__setattr__(self, 'hyperedges', tuple(kept))
        object.__setattr__(self, 'weights', _frozen(np.array(kept_weights, dtype=float)))

    @classmethod
    def from_graph(cls, graph):
        return cls(graph.n, [tuple(row) for row in graph.edges.tolist()], graph.weights)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.hyperedges == other.hyperedges
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m}, rank={self.rank})"

    @property
    def m(self):
        return len(self.hyperedges)

    @cached_property
    def sizes(self):
        return _frozen(np.array([len(e) for e in self.hyperedges], dtype=np.int64))

    @property
    def rank(self):
        return int(self.sizes.max()) if self.m else 0

    @cached_property
    def padded(self):
        """(m, rank) index array, short rows padded with their first vertex."""
        table = np.zeros((self.m, max(self.rank, 1)), dtype=np.int64)
        for row, members in enumerate(self.hyperedges):
            table[row, :] = members[0]
            table[row, :len(members)] = members
        return _frozen(table)

    @cached_property
    def degrees(self):
        """Weighted number of incident hyperedges per vertex."""
        degrees = np.zeros(self.n, dtype=float)
        for members, weight in zip(self.hyperedges, self.weights):
            degrees[list(members)] += weight
        return _frozen(degrees)

    @property
    def d_max(self):
        return float(self.degrees.max()) if self.n else 0.0

    @property
    def d_avg(self):
        return float(self.degrees.sum() / self.n) if self.n else 0.0

    @property
    def is_unweighted(self):
        return bool(np.all(self.weights == 1.0))

    def select(self, indices, weights=None):
        """Hyperedges at ``indices`` with their weights or the given ones."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        if indices.size and (indices.min() < 0 or indices.max() >= self.m):
            raise InvalidInstanceError(f"hyperedge index out of range [0, {self.m})")
        if weights is None:
            weights = self.weights[indices]
        return Hypergraph(self.n, [self.hyperedges[i] for i in indices.tolist()], weights)

    def scaled(self, factor):
        return Hypergraph(self.n, self.hyperedges, self.weights * float(factor))


def as_hypergraph(instance):
    if isinstance(instance, Hypergraph):
        return instance
    return Hypergraph.from_graph(instance)


def _check_vector(n, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise InvalidInstanceError(f"vector has shape {x.shape}, expected ({n},)")
    return x


def cut_value(graph, vertices):
    """Weighted number of edges with exactly one endpoint in the set."""
    inside = vertex_mask(graph.n, vertices)
    crossing = inside[graph.edges[:, 0]] != inside[graph.edges[:, 1]]
    return float(graph.weights[crossing].sum())


def cross_cut(graph, left, right):
    """Weighted number of edges with one endpoint in each of two disjoint sets."""
    in_left = vertex_mask(graph.n, left)
    in_right = vertex_mask(graph.n, right)
    if np.any(in_left & in_right):
        raise InvalidInstanceError("the two vertex sets overlap")
    a, b = graph.edges[:, 0], graph.edges[:, 1]
    crossing = (in_left[a] & in_right[b]) | (in_right[a] & in_left[b])
    return float(graph.weights[crossing].sum())


def hypergraph_cut(hypergraph, vertices):
    """Total weight of hyperedges meeting both the set and its complement."""
    inside = vertex_mask(hypergraph.n, vertices)
    if not hypergraph.m:
        return 0.0
    members = inside[hypergraph.padded]
    cut = members.any(axis=1) & ~members.all(axis=1)
    return float(hypergraph.weights[cut].sum())


def hypergraph_quadratic(hypergraph, x):
    """Sum over hyperedges of w_e * (max_e x - min_e x)^2."""
    x = _check_vector(hypergraph.n, x)
    if not hypergraph.m:
        return 0.0
    values = x[hypergraph.padded]
    spans = values.max(axis=1) - values.min(axis=1)
    return float(np.dot(hypergraph.weights, spans * spans))


def hypergraph_quadratic_batch(hypergraph, vectors):
    """hypergraph_quadratic for every row of a (t, n) array."""
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2 or vectors.shape[1] != hypergraph.n:
        raise InvalidInstanceError(
            f"batch has shape {vectors.shape}, expected (t, {hypergraph.n})"
        )
    result = np.zeros(vectors.shape[0], dtype=float)
    if not hypergraph.m:
        return result
    for start in range(0, vectors.shape[0], QUADRATIC_BATCH_BLOCK):
        block = vectors[start:start + QUADRATIC_BATCH_BLOCK][:, hypergraph.padded]
        spans = block.max(axis=2) - block.min(axis=2)
        result[start:start + QUADRATIC_BATCH_BLOCK] = (spans * spans) @ hypergraph.weights
    return result


def clique_expansion(hypergraph):
    """
    The associated graph: every hyperedge of size k and weight w becomes
    k(k-1)/2 edges of weight w. ``provenance`` records the source hyperedge.
    """
    pairs, weights, provenance = [], [], []
    for index, (members, weight) in enumerate(zip(hypergraph.hyperedges, hypergraph.weights)):
        for pair in itertools.combinations(members, 2):
            pairs.append(pair)
            weights.append(weight)
            provenance.append(index)
    return Graph(hypergraph.n, np.array(pairs, dtype=np.int64).reshape(-1, 2), weights, provenance)


def volume(instance, vertices):
    """Sum of weighted degrees over the set."""
    return float(instance.degrees[vertex_mask(instance.n, vertices)].sum())
