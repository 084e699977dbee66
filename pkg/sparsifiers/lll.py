"""sparsifiers.lll

Additive sparsifiers by repeated halving. One halving keeps every edge with
probability 1/2 and then resamples, Moser-Tardos style, the edges of any
small connected vertex set whose cut drifted too far from half its original
value. Repeating the halving k times and scaling by 2^k gives a cut
sparsifier for hypergraphs (``sparsify_cut``); the bilateral variant, which
also controls cuts between two sets and single-vertex degrees, gives an
additive spectral sparsifier for graphs (``sparsify_spectral_graph``).

Coins are derived from (seed, level, attempt, edge, draw count) so the
outcome does not depend on the order in which events are checked.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from hypergraphs.conf import sparsify_setting
from hypergraphs.exceptions import InvalidInstanceError
from hypergraphs.seeding import derived_coin, validate_seed
from hypergraphs.structures import Graph, as_hypergraph, clique_expansion, cross_cut, hypergraph_cut

from .config import validate_epsilon
from .enumeration import bipartitions, enumerate_connected_subsets
from .exceptions import RecertificationFailed, ResampleCapExceeded
from .results import SparsifierResult

logger = logging.getLogger(__name__)

CUT_EVENT = 'cut'
BILATERAL_EVENT = 'bilateral'
DEGREE_EVENT = 'degree'


@dataclass(frozen=True, eq=False)
class BadEventSpec:
    """
    A bad event of a halving: the selected edges among ``variables`` deviate
    from half of them by more than ``threshold``.
    """
    kind: str
    vertices: tuple
    threshold: float
    variables: np.ndarray
    other: tuple = ()

    def deviation(self, coins):
        return abs(2 * int(coins[self.variables].sum()) - len(self.variables))

    def is_violated(self, coins):
        return self.deviation(coins) > self.threshold

    @property
    def order_key(self):
        return tuple(sorted(self.vertices + self.other)), self.kind, self.vertices


@dataclass(frozen=True, eq=False)
class HalvingResult:
    edge_indices: np.ndarray
    resample_rounds: int
    core_event_count: int
    trivial_path: bool
    size_cap: int
    unit_threshold: float
    degree: float

    def as_dict(self):
        return {
            'degree': self.degree,
            'kept': int(self.edge_indices.shape[0]),
            'resample_rounds': self.resample_rounds,
            'core_events': self.core_event_count,
            'trivial_path': self.trivial_path,
            'size_cap': self.size_cap,
            'unit_threshold': self.unit_threshold,
        }


def guarded_log(value):
    return max(math.log(value), 1.0) if value > 0 else 1.0


def unit_threshold(degree, spread, threshold_constant):
    """C * sqrt(d * log(spread)); spread is d*r for cut events, d for bilateral ones."""
    return threshold_constant * math.sqrt(degree * guarded_log(spread))


def core_size_cap(n, base):
    """ceil(log_base n), at least 1."""
    if n <= 1 or base <= 1:
        return 1
    return max(1, math.ceil(math.log(n) / math.log(base) - 1e-9))


def halving_count(degree, n, epsilon, log_term, c_iter):
    """Largest k with degree * 2^-k >= c_iter * log_term / eps^2, at most floor(log2 n)."""
    target = c_iter * log_term / epsilon ** 2
    if degree < target or degree <= 0:
        return 0
    k = int(math.floor(math.log2(degree / target)))
    return max(0, min(k, int(math.floor(math.log2(n))) if n >= 1 else 0))


def _require_unweighted(instance):
    if not instance.is_unweighted:
        raise InvalidInstanceError("halving constructions need an unweighted instance")


def _incidence(n, members_per_edge):
    incident = [[] for _ in range(n)]
    for index, members in enumerate(members_per_edge):
        for v in members:
            incident[v].append(index)
    return incident


def cut_events(hypergraph, size_cap, unit):
    """A_S for every connected S of the associated graph with |S| <= size_cap."""
    incident = _incidence(hypergraph.n, hypergraph.hyperedges)
    events, enumerated = [], 0
    for subset in enumerate_connected_subsets(clique_expansion(hypergraph), size_cap):
        enumerated += 1
        inside = set(subset)
        candidates = {e for v in subset for e in incident[v]}
        crossing = sorted(e for e in candidates if not inside.issuperset(hypergraph.hyperedges[e]))
        if crossing:
            events.append(BadEventSpec(CUT_EVENT, subset, unit * len(subset), np.array(crossing)))
    return events, enumerated


def bilateral_events(graph, size_cap, unit):
    """D_v for every vertex and A_(S,T) for every split of a connected set of size <= size_cap."""
    edges = graph.edges.tolist()
    incident = _incidence(graph.n, edges)
    events, enumerated = [], 0
    for v in range(graph.n):
        enumerated += 1
        if incident[v]:
            events.append(BadEventSpec(DEGREE_EVENT, (v,), unit, np.array(incident[v])))
    for subset in enumerate_connected_subsets(graph, size_cap):
        if len(subset) < 2:
            continue
        members = set(subset)
        internal = sorted({e for v in subset for e in incident[v] if members.issuperset(edges[e])})
        for left, right in bipartitions(subset):
            enumerated += 1
            left_set = set(left)
            crossing = [e for e in internal if (edges[e][0] in left_set) != (edges[e][1] in left_set)]
            if crossing:
                threshold = unit * math.sqrt(len(left) * len(right))
                events.append(BadEventSpec(BILATERAL_EVENT, left, threshold, np.array(crossing), right))
    return events, enumerated


class ResampleLoop:
    """
    Moser-Tardos resampling over a fixed event family. While some event is
    violated, the smallest one in ``order_key`` order has all its variables
    redrawn; only events sharing a redrawn variable are re-evaluated.
    """

    def __init__(self, m, events, coin, cap):
        self.events = sorted(events, key=lambda event: event.order_key)
        self.coin = coin
        self.cap = cap
        self.draws = np.zeros(m, dtype=np.int64)
        self.coins = np.array([coin(e, 0) for e in range(m)], dtype=bool)
        self.edge_events = [[] for _ in range(m)]
        for position, event in enumerate(self.events):
            for e in event.variables.tolist():
                self.edge_events[e].append(position)

    def run(self, level=None):
        violated = {i for i, event in enumerate(self.events) if event.is_violated(self.coins)}
        rounds = 0
        while violated:
            if rounds >= self.cap:
                raise ResampleCapExceeded(rounds, self.cap, level)
            event = self.events[min(violated)]
            for e in event.variables.tolist():
                self.draws[e] += 1
                self.coins[e] = self.coin(e, int(self.draws[e]))
            rounds += 1
            touched = {j for e in event.variables.tolist() for j in self.edge_events[e]}
            for j in touched:
                if self.events[j].is_violated(self.coins):
                    violated.add(j)
                else:
                    violated.discard(j)
        return rounds


def _resample_cap(m, n, cap_factor):
    return int(math.ceil(cap_factor * m * guarded_log(n)))


def halve_hypergraph(hypergraph, seed, level=0, attempt=0, threshold_constant=None, cap_factor=None):
    """
    One halving of an unweighted hypergraph. When the maximum degree d is at
    most C * sqrt(d log(dr)) every subset already meets the bound and the
    plain 1/2-sample is returned.
    """
    hypergraph = as_hypergraph(hypergraph)
    _require_unweighted(hypergraph)
    seed = validate_seed(seed)
    constant = sparsify_setting('THRESHOLD_CONSTANT', threshold_constant)
    cap_factor = sparsify_setting('RESAMPLE_CAP_FACTOR', cap_factor)
    m = hypergraph.m
    degree, rank = hypergraph.d_max, hypergraph.rank
    unit = unit_threshold(degree, degree * rank, constant) if m else 0.0

    def coin(edge, draw):
        return derived_coin(seed, level, attempt, edge, draw)

    if degree <= unit or m == 0:
        coins = np.array([coin(e, 0) for e in range(m)], dtype=bool)
        return HalvingResult(np.flatnonzero(coins), 0, 0, True, 0, unit, degree)

    size_cap = core_size_cap(hypergraph.n, degree * rank)
    events, enumerated = cut_events(hypergraph, size_cap, unit)
    loop = ResampleLoop(m, events, coin, _resample_cap(m, hypergraph.n, cap_factor))
    rounds = loop.run(level)
    logger.debug(
        "Halving level %d: d=%g, %d core events, %d resample rounds", level, degree, enumerated, rounds
    )
    return HalvingResult(np.flatnonzero(loop.coins), rounds, enumerated, False, size_cap, unit, degree)


def halve_graph_bilateral(graph, seed, level=0, attempt=0, threshold_constant=None, cap_factor=None):
    """One halving of a simple unweighted graph controlling degrees and all S,T cuts."""
    _require_unweighted(graph)
    if not graph.is_simple:
        raise InvalidInstanceError("bilateral halving needs a simple graph")
    seed = validate_seed(seed)
    constant = sparsify_setting('THRESHOLD_CONSTANT', threshold_constant)
    cap_factor = sparsify_setting('RESAMPLE_CAP_FACTOR', cap_factor)
    m = graph.m
    degree = graph.d_max
    unit = unit_threshold(degree, degree, constant) if m else 0.0

    def coin(edge, draw):
        return derived_coin(seed, level, attempt, edge, draw)

    if degree <= unit or m == 0:
        coins = np.array([coin(e, 0) for e in range(m)], dtype=bool)
        return HalvingResult(np.flatnonzero(coins), 0, 0, True, 0, unit, degree)

    size_cap = core_size_cap(graph.n, degree)
    events, enumerated = bilateral_events(graph, size_cap, unit)
    loop = ResampleLoop(m, events, coin, _resample_cap(m, graph.n, cap_factor))
    rounds = loop.run(level)
    logger.debug(
        "Bilateral halving level %d: d=%g, %d core events, %d resample rounds",
        level, degree, enumerated, rounds,
    )
    return HalvingResult(np.flatnonzero(loop.coins), rounds, enumerated, False, size_cap, unit, degree)


def _halve_with_retries(halve, instance, seed, level, retries, recertify=None, **constants):
    """
    Halve ``instance``, starting over with a fresh attempt when resampling
    hits its cap or when ``recertify`` finds a core event still violated.
    Returns (result, attempts, recertified ratio or None).
    """
    retries = max(1, int(retries))
    for attempt in range(retries):
        last = attempt + 1 == retries
        try:
            result = halve(instance, seed, level=level, attempt=attempt, **constants)
        except ResampleCapExceeded as exc:
            logger.warning("Level %d attempt %d: %s", level, attempt + 1, exc)
            if last:
                raise
            continue
        if recertify is None or result.trivial_path:
            return result, attempt + 1, None
        ratio = recertify(instance, result.edge_indices, result.unit_threshold, result.size_cap)
        if ratio <= 1.0:
            return result, attempt + 1, ratio
        logger.warning("Level %d attempt %d left a core event violated (ratio %.3g)", level, attempt + 1, ratio)
        if last:
            raise RecertificationFailed(level, ratio)


def recertify_halving(hypergraph, kept, unit, size_cap):
    """
    Re-check every cut event of a halving from scratch. Returns the largest
    |2 e_F(S) - e_E(S)| / (unit * |S|) over connected S with |S| <= size_cap.
    """
    hypergraph = as_hypergraph(hypergraph)
    selected = hypergraph.select(kept)
    worst = 0.0
    for subset in enumerate_connected_subsets(clique_expansion(hypergraph), size_cap):
        deviation = abs(2 * hypergraph_cut(selected, subset) - hypergraph_cut(hypergraph, subset))
        worst = max(worst, deviation / (unit * len(subset)))
    return worst


def recertify_bilateral(graph, kept, unit, size_cap):
    """Bilateral counterpart of recertify_halving, degree events included."""
    selected = graph.select(kept)
    worst = 0.0
    for v in range(graph.n):
        worst = max(worst, abs(2 * selected.degrees[v] - graph.degrees[v]) / unit)
    for subset in enumerate_connected_subsets(graph, size_cap):
        if len(subset) < 2:
            continue
        for left, right in bipartitions(subset):
            deviation = abs(2 * cross_cut(selected, left, right) - cross_cut(graph, left, right))
            worst = max(worst, deviation / (unit * math.sqrt(len(left) * len(right))))
    return worst


def _iterate(halve, recertify, instance, k, seed, retries, constants):
    indices = np.arange(instance.m, dtype=np.int64)
    current = instance
    levels = []
    for level in range(k):
        result, attempts, ratio = _halve_with_retries(
            halve, current, seed, level, retries, recertify=recertify, **constants
        )
        record = result.as_dict()
        record.update(level=level, attempts=attempts)
        if ratio is not None:
            record['recertified_ratio'] = ratio
        levels.append(record)

        logger.info(
            "Level %d: d=%g kept %d of %d edges (%d rounds)",
            level, result.degree, result.edge_indices.shape[0], current.m, result.resample_rounds,
        )
        indices = indices[result.edge_indices]
        current = current.select(result.edge_indices)
    return indices, current, levels


def degree_drift(original, final, scale):
    """max_v |scale * deg_F(v) - deg_E(v)| relative to the original max degree."""
    if original.d_max == 0:
        return 0.0
    return float(np.abs(scale * final.degrees - original.degrees).max() / original.d_max)


def sparsify_cut(instance, epsilon, seed, c_iter=None, threshold_constant=None, cap_factor=None, retries=None):
    """
    Halve an unweighted hypergraph k times. Returns (result, k) with scale
    2^k, aiming at |2^k e_F(S) - e_E(S)| <= eps * d_max * |S| for all S.
    """
    epsilon = validate_epsilon(epsilon)
    seed = validate_seed(seed)
    hypergraph = as_hypergraph(instance)
    _require_unweighted(hypergraph)
    c_iter = sparsify_setting('C_ITER', c_iter)
    retries = sparsify_setting('RESAMPLE_RETRIES', retries)
    constants = {
        'threshold_constant': sparsify_setting('THRESHOLD_CONSTANT', threshold_constant),
        'cap_factor': sparsify_setting('RESAMPLE_CAP_FACTOR', cap_factor),
    }
    rank = max(hypergraph.rank, 2)
    k = halving_count(hypergraph.d_max, hypergraph.n, epsilon, math.log(rank / epsilon), c_iter)
    logger.info("Cut sparsifier: d=%g r=%d eps=%g -> %d halvings", hypergraph.d_max, rank, epsilon, k)
    indices, final, levels = _iterate(
        halve_hypergraph, recertify_halving, hypergraph, k, seed, retries, constants
    )
    metadata = {
        'construction': 'halving',
        'k': k,
        'c_iter': c_iter,
        'levels': levels,
        'degree_drift': degree_drift(hypergraph, final, 2 ** k),
        **constants,
    }
    return SparsifierResult(indices, 2 ** k, metadata), k


def sparsify_spectral_graph(graph, epsilon, seed, c_iter=None, threshold_constant=None, cap_factor=None, retries=None):
    """
    Bilateral halving iterated k times on a simple unweighted graph, k the
    largest integer with d * 2^-k >= c_iter * log(1/eps) / eps^2.
    """
    epsilon = validate_epsilon(epsilon)
    seed = validate_seed(seed)
    if not isinstance(graph, Graph):
        raise InvalidInstanceError("the spectral construction takes a graph")
    _require_unweighted(graph)
    if not graph.is_simple:
        raise InvalidInstanceError("the spectral construction needs a simple graph")
    c_iter = sparsify_setting('C_ITER', c_iter)
    retries = sparsify_setting('RESAMPLE_RETRIES', retries)
    constants = {
        'threshold_constant': sparsify_setting('THRESHOLD_CONSTANT', threshold_constant),
        'cap_factor': sparsify_setting('RESAMPLE_CAP_FACTOR', cap_factor),
    }
    # log(1/eps), floored at 1
    log_term = guarded_log(1 / epsilon)
    k = halving_count(graph.d_max, graph.n, epsilon, log_term, c_iter)
    logger.info("Spectral sparsifier: d=%g eps=%g -> %d halvings", graph.d_max, epsilon, k)
    indices, final, levels = _iterate(
        halve_graph_bilateral, recertify_bilateral, graph, k, seed, retries, constants
    )
    metadata = {
        'construction': 'bilateral_halving',
        'k': k,
        'log_term': log_term,
        'c_iter': c_iter,
        'levels': levels,
        'degree_drift': degree_drift(graph, final, 2 ** k),
        **constants,
    }
    return SparsifierResult(indices, 2 ** k, metadata), k


# Audits of the probability bookkeeping behind the halving step.

def chernoff_deviation(degree, rank, size):
    """
    Deviation t at which the Hoeffding bound 2 exp(-t^2 / (2N)) on
    |2X - N|, N = degree * size variables, equals (d r)^(-6 size).
    """
    variables = degree * size
    return math.sqrt(2 * variables * (math.log(2) + 6 * size * math.log(degree * rank)))


def chernoff_threshold_ok(degree, rank, size, threshold_constant=None):
    constant = sparsify_setting('THRESHOLD_CONSTANT', threshold_constant)
    threshold = constant * math.sqrt(degree * math.log(degree * rank)) * size
    return threshold >= chernoff_deviation(degree, rank, size)


def _neighbour_mass(degree, rank, size, n):
    """
    -log prod (1 - x(B)) over events B sharing a variable with an event of
    the given size, x(B) = (dr)^(-3|B|), counting at most d r |S| (e d r)^(l-1)
    neighbours of size l.
    """
    base = degree * rank
    total = 0.0
    for length in range(1, max(n, 1) + 1):
        log_count = math.log(base * size) + (length - 1) * (1 + math.log(base))
        x = math.exp(-3 * length * math.log(base))
        if x == 0.0:
            break
        contribution = math.exp(log_count + math.log(-math.log1p(-x)))
        total += contribution
        if contribution < 1e-18 * max(total, 1e-300):
            break
    return total


def lll_condition_slack(degree, rank, size, n):
    """
    log of x(A) prod (1 - x(B)) minus log of the event bound (dr)^(-6|S|).
    Nonnegative means the local lemma condition holds for events of this size.
    """
    log_base = math.log(degree * rank)
    return 3 * size * log_base - _neighbour_mass(degree, rank, size, n)


def core_tail_mass(degree, rank, n, size_cap):
    """
    Upper bound on the total x-weight of events on sets larger than
    size_cap: sum over l > size_cap of n (e d r)^(l-1) (dr)^(-3l).
    """
    base = degree * rank
    ratio = math.e * base / base ** 3
    first = n * (math.e * base) ** size_cap * base ** (-3 * (size_cap + 1))
    if ratio >= 1:
        return math.inf
    return first / (1 - ratio)
