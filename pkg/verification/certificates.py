"""verification.certificates

Independent checks of every sparsifier guarantee. Cuts are recomputed from
raw edge lists by bitmask enumeration, spectral claims by dense symmetric
eigensolvers, and the halving events by a separate itertools/networkx
enumeration. Nothing here reuses the bookkeeping of the constructions.

Every check returns a QualityReport whose ``worst_excess`` is the largest
measured amount over the stated bound.
"""
import itertools
import logging
import math

import networkx as nx
import numpy as np
from scipy import linalg

from hypergraphs.conf import sparsify_setting
from hypergraphs.exceptions import InvalidInstanceError, SizeLimitExceeded
from hypergraphs.generators import to_networkx
from hypergraphs.laplacians import check_dense_size, laplacian
from hypergraphs.structures import Graph, as_hypergraph, clique_expansion, hypergraph_cut, hypergraph_quadratic_batch

from .reports import QualityReport

logger = logging.getLogger(__name__)


# Cuts by enumeration

def _subset_codes(n):
    return np.arange(2 ** n, dtype=np.int64)


def _members(code, n):
    return [v for v in range(n) if code >> v & 1]


def _grouped_masks(hypergraph):
    """Bitmask of every distinct hyperedge with its total weight."""
    totals = {}
    for members, weight in zip(hypergraph.hyperedges, hypergraph.weights.tolist()):
        mask = sum(1 << v for v in members)
        totals[mask] = totals.get(mask, 0.0) + weight
    return totals


def cut_table(instance, codes):
    """Cut value of every subset code (graphs are 2-uniform hypergraphs)."""
    values = np.zeros(codes.shape[0])
    for mask, weight in _grouped_masks(as_hypergraph(instance)).items():
        inside = codes & mask
        values += weight * ((inside != 0) & (inside != mask))
    return values


def _sizes_and_volumes(instance, codes):
    sizes = np.zeros(codes.shape[0], dtype=np.int64)
    volumes = np.zeros(codes.shape[0])
    for v, degree in enumerate(instance.degrees.tolist()):
        bit = (codes >> v) & 1
        sizes += bit
        volumes += degree * bit
    return sizes, volumes


def additive_cut_bound(epsilon, instance):
    """eps * d_avg * |S| + eps * vol(S)."""
    d_avg = instance.d_avg

    def bound(sizes, volumes):
        return epsilon * d_avg * sizes + epsilon * volumes

    return bound


def degree_cut_bound(epsilon, instance):
    """eps * d_max * |S|."""
    d_max = instance.d_max

    def bound(sizes, volumes):
        return epsilon * d_max * sizes

    return bound


def brute_force_cut_check(instance, selected, scale, bound, epsilon=None, limit=None):
    """
    |c e_F(S) - e_E(S)| against bound(|S|, vol(S)) over all 2^n subsets.
    ``selected`` is the unscaled multiset F as an instance on the same
    vertices.
    """
    limit = sparsify_setting('MAX_BRUTE_FORCE_VERTICES', limit)
    if instance.n > limit:
        raise SizeLimitExceeded("instance for exhaustive cuts", instance.n, limit)
    if selected.n != instance.n:
        raise InvalidInstanceError("sparsifier and instance have different vertex counts")
    codes = _subset_codes(instance.n)
    deviation = np.abs(scale * cut_table(selected, codes) - cut_table(instance, codes))
    sizes, volumes = _sizes_and_volumes(instance, codes)
    excess = deviation - bound(sizes, volumes)
    worst = int(np.argmax(excess))
    nonzero = sizes > 0
    ratio = float(np.max(deviation[nonzero] / np.maximum(sizes[nonzero], 1))) if instance.n else 0.0
    logger.debug("Exhaustive cut check over %d subsets: worst excess %.3g", codes.shape[0], excess[worst])
    return QualityReport(
        guarantee='cut',
        epsilon=epsilon,
        scale=scale,
        worst_excess=float(excess[worst]),
        worst_value=float(deviation.max()),
        witness=_members(worst, instance.n),
        details={'subsets': int(codes.shape[0]), 'max_deviation_per_vertex': ratio},
    )


# Spectral certificates

def _normalized_extremes(difference, diagonal):
    """
    Extreme eigenvalues of I +/- B^(-1/2) M B^(-1/2) for B = diag(diagonal),
    with the eigenvector of the worst side.
    """
    root = 1 / np.sqrt(diagonal)
    scaled = difference * root[:, None] * root[None, :]
    scaled = (scaled + scaled.T) / 2
    values, vectors = linalg.eigh(scaled)
    upper_side = 1 - values[-1]
    lower_side = 1 + values[0]
    witness = vectors[:, -1] if upper_side <= lower_side else vectors[:, 0]
    return upper_side, lower_side, witness


def spectral_additive_check(graph, selected, scale, epsilon, slack=1.0, limit=None):
    """
    -B <= c L_F - L_G <= B with B = slack * eps * (D_G + d_avg I),
    certified by the smallest eigenvalues of B^(-1/2)(B -/+ M)B^(-1/2).
    """
    check_dense_size(graph.n, limit)
    M = scale * laplacian(selected, limit).L - laplacian(graph, limit).L
    diagonal = slack * epsilon * (graph.degrees + graph.d_avg)
    norm = float(np.abs(linalg.eigh(M, eigvals_only=True)).max()) if graph.n else 0.0
    if graph.n == 0 or np.any(diagonal <= 0):
        if norm > 0:
            raise InvalidInstanceError("the additive bound is singular for this graph")
        upper_side = lower_side = 1.0
        witness = []
    else:
        upper_side, lower_side, witness = _normalized_extremes(M, diagonal)
    d_max = graph.d_max
    denominator = epsilon * d_max if d_max else 1.0
    return QualityReport(
        guarantee='spectral',
        epsilon=epsilon,
        scale=scale,
        worst_excess=-min(upper_side, lower_side),
        worst_value=norm,
        witness=witness,
        certificate_eigenvalues={'upper': upper_side, 'lower': lower_side},
        slack_constants={
            'norm_over_eps_dmax': norm / denominator,
            'norm_over_eps_log_dmax': norm / (denominator * max(math.log(1 / epsilon), 1.0)),
            'slack': slack,
        },
    )


def _top_eigen(matrix):
    values, vectors = linalg.eigh((matrix + matrix.T) / 2)
    return float(values[-1]), vectors[:, -1]


def det_certificate(graph, selected, scale, epsilon, slack=1.0, limit=None):
    """
    Both sides of
        2c D_F - 2 D_G - s eps d I <= c L_F - L_G <= s eps d I
    plus the signless form c SL_F - SL_G <= s eps d I, with d = d_max and
    s the slack. The lower side and the signless form are the same matrix
    inequality; both are computed and reported.
    """
    check_dense_size(graph.n, limit)
    F, G = laplacian(selected, limit), laplacian(graph, limit)
    d = graph.d_max
    allowance = slack * epsilon * d
    identity = np.eye(graph.n)
    difference = scale * F.L - G.L
    lower_gap = difference - (2 * scale * F.D - 2 * G.D - allowance * identity)
    signless = scale * F.SL - G.SL
    if graph.n == 0:
        return QualityReport('det', epsilon, scale, worst_excess=-allowance)

    top_difference, witness_upper = _top_eigen(difference)
    lowest_gap_values, lowest_gap_vectors = linalg.eigh((lower_gap + lower_gap.T) / 2)
    top_signless, witness_signless = _top_eigen(signless)
    excesses = {
        'upper': top_difference - allowance,
        'lower': -float(lowest_gap_values[0]),
        'signless': top_signless - allowance,
    }
    side = max(sorted(excesses), key=excesses.get)
    witness = {
        'upper': witness_upper, 'lower': lowest_gap_vectors[:, 0], 'signless': witness_signless,
    }[side]
    denominator = epsilon * d if d else 1.0
    return QualityReport(
        guarantee='det',
        epsilon=epsilon,
        scale=scale,
        worst_excess=excesses[side],
        worst_value=max(top_difference, top_signless),
        witness=witness,
        certificate_eigenvalues={
            'upper': top_difference,
            'lower_gap': float(lowest_gap_values[0]),
            'signless': top_signless,
        },
        slack_constants={
            'measured_constant': max(top_difference, top_signless, 0.0) / denominator,
            'slack': slack,
        },
        details={'failing_side': side if excesses[side] > 0 else None},
    )


# Hypergraph quadratic forms

def _project_off_components(vectors, labels):
    for component in np.unique(labels):
        members = labels == component
        vectors[:, members] -= vectors[:, members].mean(axis=1, keepdims=True)
    return vectors


def _component_labels(hypergraph):
    expanded = clique_expansion(hypergraph)
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(hypergraph.n))
    positive = expanded.weights > 0
    nx_graph.add_edges_from(expanded.edges[positive].tolist())
    labels = np.zeros(hypergraph.n, dtype=np.int64)
    for index, component in enumerate(sorted(nx.connected_components(nx_graph), key=min)):
        labels[list(component)] = index
    return labels


def _ratios(original, sparse):
    usable = original > 1e-12
    ratios = np.zeros(original.shape[0])
    ratios[usable] = np.abs(sparse[usable] - original[usable]) / original[usable]
    return ratios


def hypergraph_multiplicative_check(hypergraph, sparsifier, epsilon, trials=None, seed=0, exhaustive_limit=None):
    """
    max |Q_sparse(x) - Q_H(x)| / Q_H(x) over every cut indicator (when
    n <= exhaustive_limit) and over ``trials`` random unit vectors
    orthogonal to the constants of each component.
    """
    hypergraph, sparsifier = as_hypergraph(hypergraph), as_hypergraph(sparsifier)
    trials = sparsify_setting('RANDOM_TRIALS', trials)
    exhaustive_limit = sparsify_setting('MAX_EXHAUSTIVE_MULTIPLICATIVE_VERTICES', exhaustive_limit)
    n = hypergraph.n
    worst_ratio, witness, exhaustive = 0.0, None, n <= exhaustive_limit

    if exhaustive:
        codes = _subset_codes(n)
        ratios = _ratios(cut_table(hypergraph, codes), cut_table(sparsifier, codes))
        position = int(np.argmax(ratios))
        worst_ratio, witness = float(ratios[position]), _members(position, n)

    if trials and n:
        rng = np.random.default_rng(seed)
        vectors = _project_off_components(rng.normal(size=(trials, n)), _component_labels(hypergraph))
        norms = np.linalg.norm(vectors, axis=1)
        vectors = vectors[norms > 1e-12] / norms[norms > 1e-12, None]
        ratios = _ratios(hypergraph_quadratic_batch(hypergraph, vectors), hypergraph_quadratic_batch(sparsifier, vectors))
        if ratios.size and ratios.max() > worst_ratio:
            position = int(np.argmax(ratios))
            worst_ratio, witness = float(ratios[position]), vectors[position]

    return QualityReport(
        guarantee='hyper',
        epsilon=epsilon,
        scale=1.0,
        worst_excess=worst_ratio - epsilon,
        worst_value=worst_ratio,
        witness=witness,
        seeds=[seed],
        details={'exhaustive': exhaustive, 'trials': int(trials)},
    )


# Effective resistances

def resistance_identities_check(graph, table=None, triples=100000, seed=0, tolerance=1e-6):
    """
    Per component, sum of w_ab r_ab over edges equals size - 1; resistances
    obey the triangle inequality on sampled triples; the table agrees with
    a direct pseudoinverse of the whole Laplacian.
    """
    if table is None:
        from sparsifiers.spectral import effective_resistances
        table = effective_resistances(graph)
    L = laplacian(graph).L
    pseudo = np.linalg.pinv(L, rcond=1e-10, hermitian=True)
    diagonal = np.diag(pseudo)
    direct = diagonal[:, None] + diagonal[None, :] - 2 * pseudo

    nx_graph = to_networkx(Graph(graph.n, graph.edges[graph.weights > 0]))
    components = [sorted(c) for c in nx.connected_components(nx_graph)]
    label = np.zeros(graph.n, dtype=np.int64)
    for index, members in enumerate(components):
        label[members] = index

    excess, witness = -tolerance, None
    sums = {}
    for index, members in enumerate(components):
        inside = np.isin(graph.edges[:, 0], members) & (graph.weights > 0)
        total = float(np.dot(graph.weights[inside], table.edge_resistances[inside]))
        sums[str(members[0])] = total
        gap = abs(total - (len(members) - 1)) - tolerance * max(1, len(members))
        if gap > excess:
            excess, witness = gap, {'component': members, 'sum': total}

    same = label[graph.edges[:, 0]] == label[graph.edges[:, 1]]
    positive_edges = same & (graph.weights > 0)
    if np.any(positive_edges):
        rows = graph.edges[positive_edges]
        disagreement = np.abs(table.edge_resistances[positive_edges] - direct[rows[:, 0], rows[:, 1]])
        gap = float(disagreement.max()) - tolerance
        if gap > excess:
            excess, witness = gap, {'edge': rows[int(np.argmax(disagreement))]}

    rng = np.random.default_rng(seed)
    triangle_gap = -math.inf
    if graph.n >= 3 and triples:
        picks = rng.integers(0, graph.n, size=(triples, 3))
        picks = picks[(label[picks[:, 0]] == label[picks[:, 1]]) & (label[picks[:, 1]] == label[picks[:, 2]])]
        if picks.size:
            a, b, c = picks[:, 0], picks[:, 1], picks[:, 2]
            violation = direct[a, b] - direct[a, c] - direct[c, b]
            triangle_gap = float(violation.max())
            if triangle_gap - tolerance > excess:
                excess = triangle_gap - tolerance
                witness = {'triple': picks[int(np.argmax(violation))]}
    return QualityReport(
        guarantee='resistance',
        epsilon=0.0,
        scale=1.0,
        worst_excess=excess,
        witness=witness,
        seeds=[seed],
        details={'component_sums': sums, 'components': len(components), 'triangle_gap': triangle_gap},
    )


# Halving events

def _halving_threshold(degree, spread, threshold_constant):
    log_term = math.log(spread) if spread > 1 else 0.0
    return threshold_constant * math.sqrt(degree * max(log_term, 1.0))


def core_event_certificate(hypergraph, selected, threshold_constant=None, size_cap=1):
    """
    Every vertex set S with |S| <= size_cap that is connected in the
    associated graph satisfies |2 e_F(S) - e_E(S)| <= C sqrt(d log(dr)) |S|.
    """
    hypergraph, selected = as_hypergraph(hypergraph), as_hypergraph(selected)
    constant = sparsify_setting('THRESHOLD_CONSTANT', threshold_constant)
    unit = _halving_threshold(hypergraph.d_max, hypergraph.d_max * hypergraph.rank, constant)
    associated = to_networkx(clique_expansion(hypergraph))
    excess, ratio, witness, checked = -math.inf, 0.0, None, 0
    for size in range(1, size_cap + 1):
        for subset in itertools.combinations(range(hypergraph.n), size):
            if size > 1 and not nx.is_connected(associated.subgraph(subset)):
                continue
            checked += 1
            deviation = abs(2 * hypergraph_cut(selected, subset) - hypergraph_cut(hypergraph, subset))
            bound = unit * size
            if deviation - bound > excess:
                excess, witness = deviation - bound, list(subset)
            ratio = max(ratio, deviation / bound if bound else 0.0)
    return QualityReport(
        guarantee='halving',
        epsilon=0.0,
        scale=2.0,
        worst_excess=excess if checked else 0.0,
        worst_value=ratio,
        witness=witness,
        details={'events': checked, 'unit_threshold': unit, 'size_cap': size_cap},
    )


def bilateral_certificate(graph, selected, threshold_constant=None, size_cap=2):
    """
    Degree events |2 deg_F(v) - deg_G(v)| <= C sqrt(d log d) and, for every
    connected U with |U| <= size_cap split into S, T,
    |2 e_F(S,T) - e_G(S,T)| <= C sqrt(d log d) sqrt(|S||T|).
    """
    constant = sparsify_setting('THRESHOLD_CONSTANT', threshold_constant)
    unit = _halving_threshold(graph.d_max, graph.d_max, constant)
    nx_graph = to_networkx(graph)
    excess, ratio, witness, checked = -math.inf, 0.0, None, 0

    def record(deviation, bound, where):
        nonlocal excess, ratio, witness, checked
        checked += 1
        if deviation - bound > excess:
            excess, witness = deviation - bound, where
        ratio = max(ratio, deviation / bound if bound else 0.0)

    for v in range(graph.n):
        record(abs(2 * selected.degrees[v] - graph.degrees[v]), unit, {'vertex': v})

    def crossing(instance, left, right):
        a, b = instance.edges[:, 0], instance.edges[:, 1]
        in_left, in_right = np.isin(a, left), np.isin(b, right)
        return float(instance.weights[(in_left & in_right) | (np.isin(a, right) & np.isin(b, left))].sum())

    for size in range(2, size_cap + 1):
        for subset in itertools.combinations(range(graph.n), size):
            if not nx.is_connected(nx_graph.subgraph(subset)):
                continue
            rest = subset[1:]
            for chosen in range(len(rest) + 1):
                for extra in itertools.combinations(rest, chosen):
                    left = (subset[0],) + extra
                    right = tuple(v for v in rest if v not in extra)
                    if not right:
                        continue
                    deviation = abs(2 * crossing(selected, left, right) - crossing(graph, left, right))
                    record(deviation, unit * math.sqrt(len(left) * len(right)), {'S': left, 'T': right})
    return QualityReport(
        guarantee='bilateral_halving',
        epsilon=0.0,
        scale=2.0,
        worst_excess=excess if checked else 0.0,
        worst_value=ratio,
        witness=witness,
        details={'events': checked, 'unit_threshold': unit, 'size_cap': size_cap},
    )


def sampled_cut_check(instance, selected, scale, bound, epsilon=None, trials=None, seed=0):
    """
    brute_force_cut_check restricted to every singleton and ``trials``
    uniformly random subsets, for instances too large to enumerate.
    """
    hypergraph, sparse = as_hypergraph(instance), as_hypergraph(selected)
    if sparse.n != hypergraph.n:
        raise InvalidInstanceError("sparsifier and instance have different vertex counts")
    trials = sparsify_setting('RANDOM_TRIALS', trials)
    n = hypergraph.n
    rng = np.random.default_rng(seed)
    indicators = np.vstack([np.eye(n), rng.integers(0, 2, size=(trials, n))]).astype(float)
    deviation = np.abs(
        scale * hypergraph_quadratic_batch(sparse, indicators) - hypergraph_quadratic_batch(hypergraph, indicators)
    )
    sizes = indicators.sum(axis=1)
    volumes = indicators @ instance.degrees
    excess = deviation - bound(sizes, volumes)
    worst = int(np.argmax(excess)) if excess.size else 0
    return QualityReport(
        guarantee='cut',
        epsilon=epsilon,
        scale=scale,
        worst_excess=float(excess[worst]) if excess.size else 0.0,
        worst_value=float(deviation.max()) if deviation.size else 0.0,
        witness=np.flatnonzero(indicators[worst]) if excess.size else [],
        seeds=[seed],
        details={'subsets': int(indicators.shape[0]), 'exhaustive': False},
    )
