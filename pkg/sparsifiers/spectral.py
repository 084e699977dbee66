"""sparsifiers.spectral

Multiplicative spectral sparsifiers for weighted hypergraphs by importance
sampling. Each hyperedge is weighted by the largest effective resistance
between two of its vertices in the associated (clique-expanded) graph,
hyperedges are bucketed by size, and every hyperedge is kept independently
with a power-of-two probability and reweighted by its inverse.
"""
import itertools
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from hypergraphs.conf import sparsify_setting
from hypergraphs.exceptions import InvalidInstanceError, MissingResistanceError
from hypergraphs.laplacians import check_dense_size
from hypergraphs.seeding import derived_uniform, validate_seed
from hypergraphs.structures import as_hypergraph, clique_expansion

from .config import validate_epsilon
from .exceptions import SandwichViolation
from .results import SparsifierResult

logger = logging.getLogger(__name__)

SANDWICH_TOLERANCE = 1e-9


def component_labels(graph):
    """Connected component of every vertex, edges of weight zero ignored."""
    positive = graph.weights > 0
    rows, cols = graph.edges[positive, 0], graph.edges[positive, 1]
    adjacency = coo_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(graph.n, graph.n))
    count, labels = connected_components(adjacency, directed=False)
    return count, labels


@dataclass(frozen=True, eq=False)
class ResistanceTable:
    """
    Effective resistances of the pairs spanned by the edges of a graph,
    optionally extended with the hyperedge resistances r_e.
    """
    n: int
    pairs: dict
    edge_resistances: np.ndarray
    components: np.ndarray
    component_count: int
    hyperedge_values: np.ndarray = None

    def pair(self, a, b):
        key = (a, b) if a < b else (b, a)
        try:
            return self.pairs[key]
        except KeyError:
            raise MissingResistanceError(f"no resistance recorded for pair {key}") from None


def _component_pseudoinverse(L, cutoff):
    values, vectors = linalg.eigh(L)
    top = values[-1] if values.size else 0.0
    keep = values > cutoff * max(top, 0.0)
    if not np.any(keep):
        return np.zeros_like(L)
    return (vectors[:, keep] / values[keep]) @ vectors[:, keep].T


def effective_resistances(graph, cutoff=None, limit=None):
    """
    r_ab = (1_a - 1_b)^T L^+ (1_a - 1_b) for every edge, computed per
    connected component. Pairs in different components get resistance inf.
    """
    cutoff = sparsify_setting('PSEUDOINVERSE_CUTOFF', cutoff)
    check_dense_size(graph.n, limit, what="graph for resistances")
    count, labels = component_labels(graph)
    positions = np.zeros(graph.n, dtype=np.int64)
    pseudoinverses = {}
    for component in range(count):
        members = np.flatnonzero(labels == component)
        positions[members] = np.arange(members.size)
        if members.size == 1:
            pseudoinverses[component] = np.zeros((1, 1))
            continue
        inside = (labels[graph.edges[:, 0]] == component) & (graph.weights > 0)
        local = positions[graph.edges[inside]]
        L = np.zeros((members.size, members.size))
        np.add.at(L, (local[:, 0], local[:, 1]), -graph.weights[inside])
        L = L + L.T
        L[np.diag_indices_from(L)] = -L.sum(axis=1)
        pseudoinverses[component] = _component_pseudoinverse(L, cutoff)

    resistances = np.empty(graph.m)
    pairs = {}
    for index, (a, b) in enumerate(graph.edges.tolist()):
        if labels[a] != labels[b]:
            value = math.inf
        else:
            P = pseudoinverses[labels[a]]
            i, j = positions[a], positions[b]
            value = float(P[i, i] + P[j, j] - 2 * P[i, j])
        resistances[index] = value
        pairs[(a, b)] = value
    logger.debug("Resistances for %d edges over %d components", graph.m, count)
    return ResistanceTable(graph.n, pairs, resistances, labels, count)


def hyperedge_resistances(hypergraph, table):
    """The table extended with r_e = max over pairs a, b in e of r_ab."""
    values = np.array([
        max(table.pair(a, b) for a, b in itertools.combinations(members, 2))
        for members in hypergraph.hyperedges
    ], dtype=float)
    return replace(table, hyperedge_values=values)


def resistance_table(hypergraph, cutoff=None, limit=None):
    """Resistances of the associated graph followed by hyperedge resistances."""
    hypergraph = as_hypergraph(hypergraph)
    return hyperedge_resistances(hypergraph, effective_resistances(clique_expansion(hypergraph), cutoff, limit))


@dataclass(frozen=True)
class Bucket:
    index: int
    members: tuple
    epsilon: float
    size_bound: int
    threshold: float


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    buckets: tuple
    probabilities: np.ndarray
    bucket_of: np.ndarray
    epsilon: float
    c_l: float

    @property
    def expected_size(self):
        return float(self.probabilities.sum())

    def doubling_bound(self, resistances):
        """2 * sum_e r_e / L_i over sampled hyperedges plus the kept ones."""
        thresholds = np.array([self.buckets[b].threshold for b in self.bucket_of.tolist()])
        certain = self.probabilities == 1.0
        finite = ~certain & np.isfinite(resistances)
        return float(2 * np.sum(resistances[finite] / thresholds[finite]) + np.count_nonzero(certain))


def round_probability(ratio):
    """min(1, ratio) rounded up to a power of two."""
    if not ratio < 1 or ratio <= 0:
        return 1.0
    probability = 2.0 ** -math.floor(math.log2(1 / ratio))
    while probability < ratio:
        probability *= 2
    return min(probability, 1.0)


def build_plan(hypergraph, table, epsilon, c_l=None):
    """
    Bucket i holds hyperedges of size in (2^(i-1), 2^i], with
    eps_i = min(1, eps 2^((i - ceil(log2 r)) / 2)) and
    L_i = c_L eps_i^2 / (2^(4i) ln n); p_e = min(1, r_e / L_i) rounded up.
    """
    hypergraph = as_hypergraph(hypergraph)
    epsilon = validate_epsilon(epsilon)
    c_l = sparsify_setting('C_L', c_l)
    if table.hyperedge_values is None:
        table = hyperedge_resistances(hypergraph, table)
    resistances = table.hyperedge_values
    top = int(math.ceil(math.log2(max(hypergraph.rank, 2))))
    log_n = math.log(max(hypergraph.n, 2))
    sizes = hypergraph.sizes
    indices = np.array([int(math.ceil(math.log2(k))) for k in sizes.tolist()], dtype=np.int64)

    buckets, bucket_of = [], np.zeros(hypergraph.m, dtype=np.int64)
    probabilities = np.ones(hypergraph.m)
    for position, i in enumerate(sorted(set(indices.tolist()))):
        members = np.flatnonzero(indices == i)
        eps_i = min(1.0, epsilon * 2 ** ((i - top) / 2))
        threshold = c_l * eps_i ** 2 / (2 ** (4 * i) * log_n)
        buckets.append(Bucket(i, tuple(members.tolist()), eps_i, 2 ** i, threshold))
        bucket_of[members] = position
        for e in members.tolist():
            probabilities[e] = round_probability(resistances[e] / threshold)
    plan = SamplingPlan(tuple(buckets), probabilities, bucket_of, epsilon, c_l)
    logger.info(
        "Sampling plan: %d buckets, expected %.1f of %d hyperedges", len(buckets), plan.expected_size, hypergraph.m
    )
    return plan


def sampled_indices(plan, seed):
    """Indices of the hyperedges whose (seed, index) draw falls below p_e."""
    seed = validate_seed(seed)
    kept = [
        e for e, p in enumerate(plan.probabilities.tolist())
        if p >= 1.0 or derived_uniform(seed, e) < p
    ]
    return np.array(kept, dtype=np.int64)


def sample_sparsifier(hypergraph, plan, seed):
    """Each hyperedge kept with probability p_e and weight w_e / p_e."""
    hypergraph = as_hypergraph(hypergraph)
    kept = sampled_indices(plan, seed)
    return hypergraph.select(kept, weights=hypergraph.weights[kept] / plan.probabilities[kept])


def size_constant(expected_size, epsilon, rank, n):
    """expected size / (eps^-2 r^3 n ln n)."""
    return expected_size / (epsilon ** -2 * rank ** 3 * n * math.log(max(n, 2)))


def sparsify_hypergraph(hypergraph, epsilon, seed, c_l=None, cutoff=None, limit=None):
    """Resistances, plan and sample in one call, as a SparsifierResult."""
    hypergraph = as_hypergraph(hypergraph)
    table = resistance_table(hypergraph, cutoff, limit)
    plan = build_plan(hypergraph, table, epsilon, c_l)
    kept = sampled_indices(plan, seed)
    metadata = {
        'construction': 'resistance_sampling',
        'c_l': plan.c_l,
        'buckets': [
            {'index': b.index, 'count': len(b.members), 'epsilon': b.epsilon, 'threshold': b.threshold}
            for b in plan.buckets
        ],
        'expected_size': plan.expected_size,
        'size_constant': size_constant(plan.expected_size, plan.epsilon, max(hypergraph.rank, 2), hypergraph.n),
        'probabilities': plan.probabilities[kept].tolist(),
    }
    return SparsifierResult(kept, 1.0, metadata), plan


@dataclass(frozen=True, eq=False)
class SandwichBounds:
    lower: float
    value: float
    upper: float
    per_edge_lower: np.ndarray
    per_edge_value: np.ndarray
    per_edge_upper: np.ndarray
    aggregate: tuple = None


def sandwich_bounds(hypergraph, x, check=True):
    """
    Clique bounds on every hyperedge term: for a k-edge
    2/(k(k-1)) x^T L_e x <= Q_e(x) <= 2/k x^T L_e x, with L_e the clique
    Laplacian. When all sizes lie in (r/2, r] the aggregate pair
    (2/(r(r-1)), 4/r) times x^T L_G x is reported too.
    """
    hypergraph = as_hypergraph(hypergraph)
    x = np.asarray(x, dtype=float)
    if x.shape != (hypergraph.n,):
        raise InvalidInstanceError(f"vector has shape {x.shape}, expected ({hypergraph.n},)")
    sizes = hypergraph.sizes.astype(float)
    values = x[hypergraph.padded]
    spans = values.max(axis=1) - values.min(axis=1)
    terms = hypergraph.weights * spans ** 2
    clique = np.array([
        sum((x[a] - x[b]) ** 2 for a, b in itertools.combinations(members, 2))
        for members in hypergraph.hyperedges
    ]) * hypergraph.weights if hypergraph.m else np.zeros(0)
    lower = 2 / (sizes * (sizes - 1)) * clique
    upper = 2 / sizes * clique

    aggregate = None
    rank = hypergraph.rank
    if hypergraph.m and np.all(sizes > rank / 2):
        total = float(clique.sum())
        aggregate = (2 / (rank * (rank - 1)) * total, 4 / rank * total)

    if check:
        slack = SANDWICH_TOLERANCE * np.maximum(1.0, np.abs(clique))
        if np.any(lower > terms + slack) or np.any(terms > upper + slack):
            worst = int(np.argmax(np.maximum(lower - terms, terms - upper)))
            raise SandwichViolation(f"hyperedge {worst} leaves its clique bounds")
        if aggregate is not None:
            value = float(terms.sum())
            margin = SANDWICH_TOLERANCE * max(1.0, abs(value))
            if not aggregate[0] - margin <= value <= aggregate[1] + margin:
                raise SandwichViolation("hypergraph form leaves the aggregate clique bounds")
    return SandwichBounds(
        float(lower.sum()), float(terms.sum()), float(upper.sum()), lower, terms, upper, aggregate
    )
