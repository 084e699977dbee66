"""sparsifiers.game

Deterministic unweighted sparsifier from an online density-matrix game.

The player holds a block-diagonal density matrix X_t = diag(Y_t, Z_t), the
regularized leader for the square-root regularizer::

    X_t = (nu I - eta * sum_{s<t} C_s)^(-2),   trace X_t = 1

and the adversary answers with the edge (a, b) minimizing
Y_t . (m L_ab) + Z_t . (m SL_ab), which makes the block payoff nonpositive.
The cost fed back is C_t = 2 d_max I + diag(m L_ab - L_G, m SL_ab - SL_G).
After T rounds the multiset of answered edges, scaled by m / T, is the
sparsifier.
"""
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg, optimize

from hypergraphs.conf import sparsify_setting
from hypergraphs.exceptions import InvalidInstanceError, SizeLimitExceeded
from hypergraphs.laplacians import laplacian

from .config import validate_epsilon
from .exceptions import BisectionFailure, WidthConditionViolated
from .results import SparsifierResult

logger = logging.getLogger(__name__)

WIDTH_LIMIT = 0.25
# epsilon entering the learning rate is capped here
EPSILON_CAP = 0.25
# rounding allowed in the trace map at the ends of the bracket
ROOT_SLACK = 1e-12


def floored(values, floor=None, top=None):
    """Copy of ``values`` with entries below floor * top set to zero."""
    floor = sparsify_setting('EIGEN_FLOOR', floor)
    top = float(values.max()) if top is None else top
    return np.where(values < floor * top, 0.0, values)


@dataclass(frozen=True, eq=False)
class DensityState:
    """
    Accumulated costs of both blocks and, once ``ftrl_update`` has run, the
    iterate (Y, Z) with the eigen-decomposition it was built from.
    """
    eta: float
    cost_laplacian: np.ndarray
    cost_signless: np.ndarray
    Y: np.ndarray = None
    Z: np.ndarray = None
    nu: float = None
    spectra: tuple = field(default=None, repr=False)

    @classmethod
    def initial(cls, n, eta):
        return cls(eta=float(eta), cost_laplacian=np.zeros((n, n)), cost_signless=np.zeros((n, n)))

    @property
    def n(self):
        return self.cost_laplacian.shape[0]

    def played(self, cost_laplacian, cost_signless):
        """State after one more round of cost, iterate not yet recomputed."""
        return DensityState(
            eta=self.eta,
            cost_laplacian=self.cost_laplacian + cost_laplacian,
            cost_signless=self.cost_signless + cost_signless,
        )

    def quarter_powers(self, floor=None):
        """
        (Y^(1/4), Z^(1/4)) from the stored eigenbasis. Eigenvalues below
        EIGEN_FLOOR times the largest one are taken as zero.
        """
        if self.spectra is None:
            raise ValueError("ftrl_update has not been applied to this state")
        top = self.top_weight
        return tuple(
            (vectors * floored(values, floor, top) ** 0.25) @ vectors.T for values, vectors in self.spectra
        )

    @property
    def top_weight(self):
        return max(float(values.max()) for values, _ in self.spectra)

    @property
    def trace(self):
        return float(np.trace(self.Y) + np.trace(self.Z))


def _shift(eigenvalues, eta, tolerance):
    """
    The nu > eta * max(mu) with sum 1 / (nu - eta mu_i)^2 = 1. The trace map
    is decreasing on that interval; its root lies in
    [eta mu_max + 1, eta mu_max + sqrt(2n)].
    """
    top = eta * float(eigenvalues.max())
    lower, upper = top + 1.0, top + math.sqrt(eigenvalues.shape[0])

    def excess(nu):
        return float(np.sum((nu - eta * eigenvalues) ** -2.0)) - 1.0

    low_value, high_value = excess(lower), excess(upper)
    if low_value < -ROOT_SLACK or high_value > ROOT_SLACK:
        raise BisectionFailure(
            f"trace map does not change sign on [{lower}, {upper}]: {low_value}, {high_value}"
        )
    if high_value >= 0:
        return upper
    try:
        return optimize.brentq(excess, lower, upper, xtol=tolerance, rtol=4 * np.finfo(float).eps)
    except (ValueError, RuntimeError) as exc:
        raise BisectionFailure(str(exc)) from exc


def ftrl_update(state, tolerance=None, floor=None):
    """
    Recompute the iterate for the accumulated costs. Returns a new
    DensityState whose Y and Z are PSD, block-diagonal and of total trace 1.
    Eigenvalues of the iterate below EIGEN_FLOOR * lambda_max are zeroed.
    """
    tolerance = sparsify_setting('BISECTION_TOLERANCE', tolerance)
    blocks = []
    for cost in (state.cost_laplacian, state.cost_signless):
        values, vectors = linalg.eigh((cost + cost.T) / 2)
        blocks.append((values, vectors))
    eigenvalues = np.concatenate([values for values, _ in blocks])
    nu = _shift(eigenvalues, state.eta, tolerance)
    weights = [(nu - state.eta * values) ** -2.0 for values, _ in blocks]
    total = sum(float(w.sum()) for w in weights)
    top = max(float(w.max()) for w in weights) / total
    spectra = tuple(
        (floored(w / total, floor, top), vectors) for w, (_, vectors) in zip(weights, blocks)
    )
    Y, Z = ((vectors * w) @ vectors.T for w, vectors in spectra)
    return replace(state, Y=Y, Z=Z, nu=nu, spectra=spectra)


def edge_scores(graph, Y, Z):
    """Y . (m L_ab) + Z . (m SL_ab) for every edge."""
    a, b = graph.edges[:, 0], graph.edges[:, 1]
    diagonal = Y[a, a] + Y[b, b] + Z[a, a] + Z[b, b]
    return graph.m * (diagonal - 2 * Y[a, b] + 2 * Z[a, b])


def select_edge(graph, Y, Z, tie_tolerance=1e-12):
    """
    Index of the edge minimizing the adversary's score. Scores within
    ``tie_tolerance`` of the minimum (relative) tie; the lexicographically
    smallest pair wins, then the smallest index.
    """
    if graph.m == 0:
        raise InvalidInstanceError("cannot select an edge from an empty edge set")
    scores = edge_scores(graph, Y, Z)
    best = scores.min()
    tied = np.flatnonzero(scores <= best + tie_tolerance * max(1.0, abs(best)))
    order = np.lexsort((tied, graph.edges[tied, 1], graph.edges[tied, 0]))
    return int(tied[order[0]])


@dataclass(frozen=True, eq=False)
class GameTranscript:
    selected: np.ndarray
    payoffs: np.ndarray
    widths: np.ndarray
    frobenius_widths: np.ndarray
    trace_errors: np.ndarray
    min_eigenvalues: np.ndarray
    gains: np.ndarray
    final_cost_top: float
    eta: float
    scale: float

    @property
    def steps(self):
        return int(self.selected.shape[0])

    @property
    def regret(self):
        """lambda_max(sum C_t) minus the gain collected by the iterates."""
        return self.final_cost_top - float(self.gains.sum())


def regret_bound(transcript, n):
    """
    Regret guarantee of the square-root regularizer on the played sequence:
    2 sqrt(2n) / eta + 2 eta sum_t ||X_t^(1/4) C_t X_t^(1/4)||_F^2.
    """
    eta = transcript.eta
    return 2 * math.sqrt(2 * n) / eta + 2 * eta * float(np.sum(transcript.frobenius_widths ** 2))


def _block_width(quarter, cost):
    product = quarter @ cost @ quarter
    product = (product + product.T) / 2
    spectral = float(np.abs(linalg.eigh(product, eigvals_only=True)).max())
    return spectral, float(np.sum(product * product))


def play_game(graph, steps, eta, tolerance=None, check_width=True):
    """Run the game for ``steps`` rounds and return the transcript."""
    n, m = graph.n, graph.m
    bundle = laplacian(graph)
    L_G, SL_G = bundle.L, bundle.SL
    shift = 2 * graph.d_max * np.eye(n)
    state = DensityState.initial(n, eta)
    records = {key: [] for key in ('selected', 'payoffs', 'widths', 'frobenius', 'trace', 'min_eig', 'gains')}
    for step in range(steps):
        state = ftrl_update(state, tolerance)
        index = select_edge(graph, state.Y, state.Z)
        a, b = graph.edges[index]
        cost_laplacian = shift - L_G
        cost_laplacian[a, a] += m
        cost_laplacian[b, b] += m
        cost_laplacian[a, b] -= m
        cost_laplacian[b, a] -= m
        cost_signless = shift - SL_G
        cost_signless[a, a] += m
        cost_signless[b, b] += m
        cost_signless[a, b] += m
        cost_signless[b, a] += m

        payoff = float(np.sum(state.Y * (cost_laplacian - shift)) + np.sum(state.Z * (cost_signless - shift)))
        gain = float(np.sum(state.Y * cost_laplacian) + np.sum(state.Z * cost_signless))
        quarter_y, quarter_z = state.quarter_powers()
        width_y, frob_y = _block_width(quarter_y, cost_laplacian)
        width_z, frob_z = _block_width(quarter_z, cost_signless)
        width = max(width_y, width_z)
        if check_width and eta * width > WIDTH_LIMIT:
            raise WidthConditionViolated(step, eta * width)
        lowest = min(float(values.min()) for values, _ in state.spectra)

        records['selected'].append(index)
        records['payoffs'].append(payoff)
        records['widths'].append(width)
        records['frobenius'].append(math.sqrt(frob_y + frob_z))
        records['trace'].append(abs(state.trace - 1.0))
        records['min_eig'].append(lowest)
        records['gains'].append(gain)
        logger.debug("Step %d: edge %d payoff %.3g width %.3g", step, index, payoff, width)
        state = state.played(cost_laplacian, cost_signless)

    top = 0.0
    if steps:
        top = max(
            float(linalg.eigh(state.cost_laplacian, eigvals_only=True)[-1]),
            float(linalg.eigh(state.cost_signless, eigvals_only=True)[-1]),
        )
    return GameTranscript(
        selected=np.array(records['selected'], dtype=np.int64),
        payoffs=np.array(records['payoffs']),
        widths=np.array(records['widths']),
        frobenius_widths=np.array(records['frobenius']),
        trace_errors=np.array(records['trace']),
        min_eigenvalues=np.array(records['min_eig']),
        gains=np.array(records['gains']),
        final_cost_top=top,
        eta=eta,
        scale=m / steps if steps else 1.0,
    )


def game_length(n, epsilon, c_t):
    return int(math.ceil(c_t * n / epsilon ** 2))


def learning_rate(epsilon, degree, m, eta_constant):
    """eta = min(eps, 1/4) / (eta_constant sqrt(d_max m))."""
    return min(epsilon, EPSILON_CAP) / (eta_constant * math.sqrt(degree * m))


def det_sparsify(graph, epsilon, c_t=None, eta_constant=None, max_vertices=None, tolerance=None):
    """
    T = ceil(c_T n / eps^2) rounds of the game on an unweighted graph; the
    answered edges with scale m / T. When T >= m the whole edge set is
    returned with scale 1.
    """
    epsilon = validate_epsilon(epsilon)
    if not graph.is_unweighted:
        raise InvalidInstanceError("the deterministic construction needs an unweighted graph")
    c_t = sparsify_setting('C_T', c_t)
    eta_constant = sparsify_setting('ETA_CONSTANT', eta_constant)
    limit = sparsify_setting('MAX_DET_VERTICES', max_vertices)
    if graph.n > limit:
        raise SizeLimitExceeded("graph for the deterministic construction", graph.n, limit)

    steps = game_length(graph.n, epsilon, c_t)
    metadata = {'construction': 'game', 'T': steps, 'c_t': c_t, 'eta_constant': eta_constant}
    if steps >= graph.m:
        logger.info("Game length %d >= m = %d; keeping every edge", steps, graph.m)
        metadata.update(trivial=True)
        return SparsifierResult(np.arange(graph.m), 1.0, metadata)

    eta = learning_rate(epsilon, graph.d_max, graph.m, eta_constant)
    logger.info("Playing %d rounds on n=%d m=%d (eta=%.3g)", steps, graph.n, graph.m, eta)
    transcript = play_game(graph, steps, eta, tolerance)
    normalizer = math.sqrt(graph.d_max * graph.m)
    metadata.update(
        trivial=False,
        eta=eta,
        clamped_epsilon=min(epsilon, EPSILON_CAP),
        max_payoff=float(transcript.payoffs.max()),
        max_width=float(transcript.widths.max()),
        kappa=float(transcript.widths.max() / normalizer),
        max_trace_error=float(transcript.trace_errors.max()),
        min_eigenvalue=float(transcript.min_eigenvalues.min()),
        regret=transcript.regret,
        regret_bound=regret_bound(transcript, graph.n),
        regret_per_step=transcript.regret / steps,
    )
    return SparsifierResult(transcript.selected, transcript.scale, metadata)
