"""hypergraphs.generators

Seeded instance families used by the tests and the calibrate command.
"""
import networkx as nx
import numpy as np

from .structures import Graph, Hypergraph


def from_networkx(nx_graph):
    """Graph on 0..n-1 from a networkx (multi)graph with integer nodes."""
    nodes = sorted(nx_graph.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    pairs = [(index[a], index[b]) for a, b in nx_graph.edges() if a != b]
    return Graph(len(nodes), np.array(pairs, dtype=np.int64).reshape(-1, 2))


def to_networkx(graph):
    """Simple networkx view (parallel edges collapsed) with all n vertices."""
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    nx_graph.add_edges_from(graph.edges.tolist())
    return nx_graph


def complete_graph(n):
    return from_networkx(nx.complete_graph(n))


def path_graph(n):
    return from_networkx(nx.path_graph(n))


def cycle_graph(n):
    return from_networkx(nx.cycle_graph(n))


def star_graph(leaves):
    """Center 0 joined to leaves 1..leaves."""
    return from_networkx(nx.star_graph(leaves))


def complete_bipartite_graph(left, right):
    return from_networkx(nx.complete_bipartite_graph(left, right))


def random_regular_graph(n, d, seed):
    return from_networkx(nx.random_regular_graph(d, n, seed=seed))


def random_gnp_graph(n, p, seed):
    return from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def random_uniform_hypergraph(n, m, k, seed):
    """m hyperedges, each k distinct vertices drawn uniformly."""
    rng = np.random.default_rng(seed)
    hyperedges = [rng.choice(n, size=k, replace=False).tolist() for _ in range(m)]
    return Hypergraph(n, hyperedges)


def random_rank_hypergraph(n, m, rank, seed, weighted=False):
    """m hyperedges with sizes uniform in [2, rank]."""
    rng = np.random.default_rng(seed)
    hyperedges = []
    for _ in range(m):
        size = int(rng.integers(2, rank + 1))
        hyperedges.append(rng.choice(n, size=size, replace=False).tolist())
    weights = rng.uniform(0.5, 2.0, size=m) if weighted else None
    return Hypergraph(n, hyperedges, weights)
