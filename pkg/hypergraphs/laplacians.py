"""hypergraphs.laplacians

Dense Laplacian (D - A) and signless Laplacian (D + A) matrices.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .conf import sparsify_setting
from .exceptions import SizeLimitExceeded


def check_dense_size(n, limit=None, what="instance"):
    limit = sparsify_setting('MAX_DENSE_VERTICES', limit)
    if n > limit:
        raise SizeLimitExceeded(what, n, limit)


@dataclass(frozen=True, eq=False)
class LaplacianBundle:
    L: np.ndarray
    SL: np.ndarray
    D: np.ndarray

    @property
    def A(self):
        return self.D - self.L


def adjacency_matrix(graph):
    adjacency = np.zeros((graph.n, graph.n), dtype=float)
    np.add.at(adjacency, (graph.edges[:, 0], graph.edges[:, 1]), graph.weights)
    return adjacency + adjacency.T


def laplacian(graph, limit=None):
    """Laplacian bundle of a graph; parallel edges add up."""
    check_dense_size(graph.n, limit)
    adjacency = adjacency_matrix(graph)
    degree = np.diag(graph.degrees.astype(float))
    return LaplacianBundle(L=degree - adjacency, SL=degree + adjacency, D=degree)


def edge_laplacian(n, a, b):
    """L_ab and SL_ab of the single unit edge (a, b)."""
    L = np.zeros((n, n))
    L[a, a] = L[b, b] = 1.0
    SL = L.copy()
    L[a, b] = L[b, a] = -1.0
    SL[a, b] = SL[b, a] = 1.0
    return L, SL


def extreme_eigenvalues(matrix):
    """(smallest, largest) eigenvalue of a symmetric matrix."""
    if matrix.shape[0] == 0:
        return 0.0, 0.0
    values = linalg.eigh(matrix, eigvals_only=True)
    return float(values[0]), float(values[-1])


def is_psd(matrix, tolerance=None):
    """Smallest eigenvalue is at least -tolerance * max(1, largest |eigenvalue|)."""
    tolerance = sparsify_setting('PSD_TOLERANCE', tolerance)
    low, high = extreme_eigenvalues(matrix)
    return low >= -tolerance * max(1.0, abs(high), abs(low))
