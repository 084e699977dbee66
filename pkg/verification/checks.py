"""verification.checks

Picks and runs the certificate that matches a guarantee. Used both right
after a construction and by the ``verify`` command, which only has the
instance file and the sparsifier file to go on.
"""
import logging
import math
from collections import defaultdict

import numpy as np

from hypergraphs.conf import sparsify_setting
from hypergraphs.exceptions import InvalidInstanceError
from hypergraphs.reduction import reduce_graph
from hypergraphs.structures import Graph, as_hypergraph

from .certificates import (
    additive_cut_bound,
    brute_force_cut_check,
    det_certificate,
    hypergraph_multiplicative_check,
    sampled_cut_check,
    spectral_additive_check,
)

logger = logging.getLogger(__name__)

GUARANTEES = ('cut', 'spectral', 'det', 'hyper')


def spectral_slack(slack, epsilon):
    """The additive spectral bound carries an extra log(1/eps) factor."""
    return slack * max(math.log(1 / epsilon), 1.0)


def edge_indices_of(graph, selected):
    """
    Indices into ``graph`` of the edges of ``selected``. The j-th copy of a
    pair in ``selected`` maps to the j-th parallel copy in ``graph``, cycling
    when it has fewer.
    """
    copies = defaultdict(list)
    for index, pair in enumerate(map(tuple, graph.edges.tolist())):
        copies[pair].append(index)
    seen = defaultdict(int)
    indices = []
    for pair in map(tuple, selected.edges.tolist()):
        if pair not in copies:
            raise InvalidInstanceError(f"sparsifier edge {pair} is not an edge of the instance")
        indices.append(copies[pair][seen[pair] % len(copies[pair])])
        seen[pair] += 1
    return np.array(indices, dtype=np.int64)


def _require_graph(instance, guarantee):
    if not isinstance(instance, Graph):
        raise InvalidInstanceError(f"the {guarantee} certificate needs a graph")


def certify(guarantee, instance, selected, scale, epsilon, slack=None, trials=None, seed=0):
    """
    QualityReport for ``selected`` (the unscaled multiset F, or the weighted
    sparsifier for 'hyper') against ``instance``.
    """
    if guarantee not in GUARANTEES:
        raise ValueError(f"unknown guarantee {guarantee!r}; expected one of {', '.join(GUARANTEES)}")
    slack = sparsify_setting('CERTIFICATE_SLACK', slack)
    if selected.n != instance.n:
        raise InvalidInstanceError(
            f"sparsifier has {selected.n} vertices, the instance has {instance.n}"
        )
    logger.info("Certifying %s guarantee (eps=%g, scale=%g)", guarantee, epsilon, scale)

    if guarantee == 'cut':
        bound = additive_cut_bound(epsilon, instance)
        if instance.n <= sparsify_setting('MAX_BRUTE_FORCE_VERTICES'):
            return brute_force_cut_check(instance, selected, scale, bound, epsilon=epsilon)
        logger.info("n=%d is too large to enumerate; sampling cuts instead", instance.n)
        return sampled_cut_check(instance, selected, scale, bound, epsilon=epsilon, trials=trials, seed=seed)

    if guarantee == 'spectral':
        _require_graph(instance, guarantee)
        return spectral_additive_check(instance, selected, scale, epsilon, slack=spectral_slack(slack, epsilon))

    if guarantee == 'det':
        _require_graph(instance, guarantee)
        return det_bundle_certificate(instance, selected, scale, epsilon, slack)

    return hypergraph_multiplicative_check(
        as_hypergraph(instance), as_hypergraph(selected).scaled(scale), epsilon, trials=trials, seed=seed
    )


def det_bundle_certificate(graph, selected, scale, epsilon, slack):
    """
    The deterministic construction runs on the bounded-degree reduction, so
    its certificate is checked there; the additive form on the original
    graph is attached as a detail.
    """
    reduced, _ = reduce_graph(graph)
    indices = edge_indices_of(graph, selected)
    report = det_certificate(reduced, reduced.select(indices), scale, epsilon, slack=slack)
    original = spectral_additive_check(graph, selected, scale, epsilon, slack=slack)
    report.details.update(
        reduced_n=reduced.n,
        reduced_d_max=reduced.d_max,
        original_additive={
            'worst_excess': original.worst_excess,
            'certificate_eigenvalues': original.certificate_eigenvalues,
            'passed': original.passed,
        },
    )
    return report
