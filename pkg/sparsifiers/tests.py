import itertools
import json
import math
import os
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

import networkx as nx
import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from hypergraphs.exceptions import InvalidInstanceError, MissingResistanceError, SizeLimitExceeded
from hypergraphs.formats import label_map_path, load_instance, serialize
from hypergraphs.generators import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_gnp_graph,
    random_rank_hypergraph,
    random_regular_graph,
    random_uniform_hypergraph,
)
from hypergraphs.laplacians import laplacian
from hypergraphs.seeding import derived_coin
from hypergraphs.structures import Graph, Hypergraph, hypergraph_quadratic
from sparsification_lab.settings import _from_environment
from verification.certificates import bilateral_certificate, core_event_certificate, spectral_additive_check

from .config import RunConfig
from .enumeration import bipartitions, enumerate_connected_subsets
from .exceptions import RecertificationFailed, ResampleCapExceeded, WidthConditionViolated
from .game import DensityState, det_sparsify, ftrl_update, learning_rate, play_game, select_edge
from .lll import (
    BadEventSpec,
    ResampleLoop,
    chernoff_threshold_ok,
    core_size_cap,
    core_tail_mass,
    halve_graph_bilateral,
    halve_hypergraph,
    halving_count,
    lll_condition_slack,
    recertify_bilateral,
    recertify_halving,
    sparsify_cut,
    sparsify_spectral_graph,
)
from .management.commands.calibrate import parse_sweep, recommended_value
from .models import SparsifierRun
from .spectral import (
    build_plan,
    effective_resistances,
    hyperedge_resistances,
    resistance_table,
    round_probability,
    sample_sparsifier,
    sampled_indices,
    sandwich_bounds,
    sparsify_hypergraph,
)


def two_triangles():
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def connected_by_brute_force(graph, size_cap):
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    nx_graph.add_edges_from(graph.edges.tolist())
    found = set()
    for size in range(1, size_cap + 1):
        for subset in itertools.combinations(range(graph.n), size):
            if nx.is_connected(nx_graph.subgraph(subset)):
                found.add(subset)
    return found


class EnumerationTest(SimpleTestCase):
    """Tests for connected subset enumeration"""

    def test_path_pairs(self):
        subsets = list(enumerate_connected_subsets(path_graph(4), 2))
        self.assertEqual(len(subsets), 7)
        self.assertEqual(
            set(subsets), {(0,), (1,), (2,), (3,), (0, 1), (1, 2), (2, 3)}
        )

    def test_singletons(self):
        subsets = list(enumerate_connected_subsets(complete_graph(5), 1))
        self.assertEqual(subsets, [(v,) for v in range(5)])

    def test_triangle(self):
        self.assertEqual(len(list(enumerate_connected_subsets(complete_graph(3), 3))), 7)

    def test_seed_vertices(self):
        subsets = list(enumerate_connected_subsets(path_graph(4), 2, seed_vertices=[0]))
        self.assertEqual(sorted(subsets), [(0,), (0, 1)])

    def test_size_cap_must_be_positive(self):
        with self.assertRaises(ValueError):
            list(enumerate_connected_subsets(path_graph(3), 0))

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 20), st.integers(1, 4), st.integers(0, 1000))
    def test_matches_brute_force(self, n, m, size_cap, seed):
        rng = np.random.default_rng(seed)
        pairs = [tuple(rng.choice(n, size=2, replace=False)) for _ in range(m)]
        graph = Graph(n, pairs)
        subsets = list(enumerate_connected_subsets(graph, size_cap))
        self.assertEqual(len(subsets), len(set(subsets)))
        self.assertEqual(set(subsets), connected_by_brute_force(graph, size_cap))

    def test_bipartitions(self):
        splits = list(bipartitions((0, 1, 2)))
        self.assertEqual(len(splits), 3)
        for left, right in splits:
            self.assertIn(0, left)
            self.assertTrue(right)
            self.assertEqual(sorted(left + right), [0, 1, 2])


class HalvingTest(SimpleTestCase):
    """Tests for the resampled halving step"""

    def test_halving_count(self):
        self.assertEqual(halving_count(64, 64, 1.0, math.log(3), 200), 0)
        # capped at floor(log2 n)
        self.assertEqual(halving_count(1e6, 8, 1.0, 1.0, 1.0), 3)
        self.assertEqual(halving_count(16, 32, 0.5, 1.0, 1.0), 2)

    def test_core_size_cap(self):
        self.assertEqual(core_size_cap(64, 192), 1)
        self.assertEqual(core_size_cap(1000, 10), 3)
        self.assertEqual(core_size_cap(1, 10), 1)

    def test_empty_hypergraph(self):
        result = halve_hypergraph(Hypergraph(3, []), seed=1)
        self.assertEqual(result.edge_indices.size, 0)
        self.assertEqual(result.resample_rounds, 0)

    def test_single_hyperedge_takes_trivial_path(self):
        result = halve_hypergraph(Hypergraph(3, [[0, 1, 2]]), seed=5)
        self.assertTrue(result.trivial_path)
        self.assertIn(result.edge_indices.tolist(), ([], [0]))

    def test_weighted_rejected(self):
        with self.assertRaises(InvalidInstanceError):
            halve_hypergraph(Hypergraph(3, [[0, 1, 2]], weights=[2.0]), seed=1)

    def test_deterministic(self):
        hypergraph = random_uniform_hypergraph(12, 40, 3, seed=3)
        first = halve_hypergraph(hypergraph, seed=11, threshold_constant=1.0)
        second = halve_hypergraph(hypergraph, seed=11, threshold_constant=1.0)
        np.testing.assert_array_equal(first.edge_indices, second.edge_indices)

    def test_resampled_halving_is_certified(self):
        hypergraph = random_uniform_hypergraph(12, 40, 3, seed=3)
        result = halve_hypergraph(hypergraph, seed=2024, threshold_constant=1.0)
        self.assertFalse(result.trivial_path)
        self.assertEqual(result.size_cap, 1)
        self.assertEqual(result.core_event_count, 12)
        self.assertLessEqual(
            recertify_halving(hypergraph, result.edge_indices, result.unit_threshold, result.size_cap), 1.0
        )
        report = core_event_certificate(
            hypergraph, hypergraph.select(result.edge_indices), threshold_constant=1.0, size_cap=1
        )
        self.assertTrue(report.passed)

    def test_resample_loop_fixes_violated_event(self):
        event = BadEventSpec('cut', (0,), 0.0, np.array([0, 1]))

        def coin(edge, draw):
            return derived_coin(9, edge, draw)

        loop = ResampleLoop(2, [event], coin, cap=1000)
        loop.run()
        self.assertEqual(int(loop.coins.sum()), 1)

    def test_resample_cap(self):
        event = BadEventSpec('cut', (0,), -1.0, np.array([0]))
        loop = ResampleLoop(1, [event], lambda edge, draw: True, cap=5)
        with self.assertRaises(ResampleCapExceeded) as caught:
            loop.run(level=2)
        self.assertEqual(caught.exception.rounds, 5)
        self.assertEqual(caught.exception.level, 2)

    def test_bilateral_trivial_paths(self):
        self.assertEqual(halve_graph_bilateral(Graph(4, []), seed=1).edge_indices.size, 0)
        self.assertTrue(halve_graph_bilateral(cycle_graph(6), seed=1).trivial_path)

    def test_bilateral_needs_simple_graph(self):
        with self.assertRaises(InvalidInstanceError):
            halve_graph_bilateral(Graph(3, [(0, 1), (0, 1)]), seed=1)

    def test_bilateral_resampling_on_complete_graph(self):
        graph = complete_graph(8)
        result = halve_graph_bilateral(graph, seed=77, threshold_constant=1.0)
        self.assertFalse(result.trivial_path)
        self.assertEqual(result.size_cap, 2)
        # 8 degree events and one split per edge
        self.assertEqual(result.core_event_count, 36)
        self.assertLessEqual(
            recertify_bilateral(graph, result.edge_indices, result.unit_threshold, result.size_cap), 1.0
        )
        report = bilateral_certificate(
            graph, graph.select(result.edge_indices), threshold_constant=1.0, size_cap=2
        )
        self.assertTrue(report.passed)


class IteratedHalvingTest(SimpleTestCase):
    """Tests for sparsify_cut and sparsify_spectral_graph"""

    def test_no_halving_keeps_everything(self):
        graph = complete_graph(5)
        result, k = sparsify_cut(graph, 1.0, seed=1)
        self.assertEqual(k, 0)
        self.assertEqual(result.scale, 1.0)
        np.testing.assert_array_equal(result.edge_indices, np.arange(graph.m))

    def test_chain_of_halvings(self):
        hypergraph = random_uniform_hypergraph(14, 60, 3, seed=8)
        result, k = sparsify_cut(hypergraph, 0.5, seed=3, c_iter=0.5)
        self.assertGreaterEqual(k, 1)
        self.assertEqual(result.metadata['k'], k)
        self.assertEqual(result.scale, 2 ** k)
        self.assertEqual(len(result.metadata['levels']), k)
        self.assertTrue(np.all(result.edge_indices < hypergraph.m))
        self.assertTrue(math.isfinite(result.metadata['degree_drift']))
        again, _ = sparsify_cut(hypergraph, 0.5, seed=3, c_iter=0.5)
        np.testing.assert_array_equal(result.edge_indices, again.edge_indices)

    def test_cut_rejects_weights(self):
        with self.assertRaises(InvalidInstanceError):
            sparsify_cut(Hypergraph(3, [[0, 1, 2]], weights=[0.5]), 0.5, seed=1)

    def test_spectral_without_halving_is_exact(self):
        graph = complete_graph(6)
        result, k = sparsify_spectral_graph(graph, 0.5, seed=1)
        self.assertEqual(k, 0)
        report = spectral_additive_check(graph, result.selected(graph), result.scale, 0.5)
        self.assertAlmostEqual(report.worst_value, 0.0)
        self.assertTrue(report.passed)

    def test_spectral_halving_levels(self):
        graph = random_regular_graph(32, 16, seed=5)
        result, k = sparsify_spectral_graph(graph, 0.5, seed=4, c_iter=1.0)
        self.assertEqual(k, 2)
        self.assertEqual(result.scale, 4.0)
        self.assertTrue(all(level['trivial_path'] for level in result.metadata['levels']))

    def test_spectral_resampled_level(self):
        graph = complete_graph(8)
        result, k = sparsify_spectral_graph(graph, 1.0, seed=12, c_iter=3.0, threshold_constant=1.0)
        self.assertEqual(k, 1)
        level = result.metadata['levels'][0]
        self.assertFalse(level['trivial_path'])
        self.assertLessEqual(level['recertified_ratio'], 1.0)

    def test_failed_recertification_starts_a_fresh_attempt(self):
        graph = complete_graph(8)
        with mock.patch('sparsifiers.lll.recertify_bilateral', side_effect=[2.0, 0.5]) as recertify:
            result, k = sparsify_spectral_graph(graph, 1.0, seed=12, c_iter=3.0, threshold_constant=1.0)
        self.assertEqual(recertify.call_count, 2)
        level = result.metadata['levels'][0]
        self.assertEqual(level['attempts'], 2)
        self.assertEqual(level['recertified_ratio'], 0.5)

    def test_recertification_failure_raises(self):
        graph = complete_graph(8)
        with mock.patch('sparsifiers.lll.recertify_bilateral', return_value=2.0) as recertify:
            with self.assertRaises(RecertificationFailed) as raised:
                sparsify_spectral_graph(graph, 1.0, seed=12, c_iter=3.0, threshold_constant=1.0, retries=3)
        self.assertEqual(recertify.call_count, 3)
        self.assertEqual(raised.exception.level, 0)
        self.assertEqual(raised.exception.ratio, 2.0)

    def test_spectral_log_term(self):
        result, _ = sparsify_spectral_graph(complete_graph(6), 0.5, seed=1)
        self.assertEqual(result.metadata['log_term'], 1.0)
        result, _ = sparsify_spectral_graph(complete_graph(6), 0.1, seed=1)
        self.assertAlmostEqual(result.metadata['log_term'], math.log(10))


    def test_spectral_needs_simple_graph(self):
        with self.assertRaises(InvalidInstanceError):
            sparsify_spectral_graph(Graph(3, [(0, 1), (0, 1)]), 0.5, seed=1)
        with self.assertRaises(InvalidInstanceError):
            sparsify_spectral_graph(Hypergraph(3, [[0, 1, 2]]), 0.5, seed=1)


class LocalLemmaAuditTest(SimpleTestCase):
    """Tests for the probability bookkeeping audits"""

    def test_threshold_dominates_chernoff_deviation(self):
        for size in range(1, 4):
            self.assertTrue(chernoff_threshold_ok(64, 3, size))
        self.assertFalse(chernoff_threshold_ok(64, 3, 1, threshold_constant=0.1))

    def test_condition_slack_nonnegative(self):
        for size in range(1, 4):
            self.assertGreaterEqual(lll_condition_slack(64, 3, size, 64), 0.0)

    def test_core_tail_mass(self):
        self.assertLessEqual(core_tail_mass(64, 3, 64, 1), 64 ** -3)
        self.assertEqual(core_tail_mass(1, 1, 10, 1), math.inf)


class GameTest(SimpleTestCase):
    """Tests for the density-matrix game"""

    def test_initial_iterate(self):
        state = ftrl_update(DensityState.initial(3, 0.1))
        self.assertAlmostEqual(state.nu, math.sqrt(6))
        np.testing.assert_allclose(state.Y, np.eye(3) / 6)
        np.testing.assert_allclose(state.Z, np.eye(3) / 6)

    def test_random_history_is_a_density(self):
        rng = np.random.default_rng(4)
        blocks = []
        for _ in range(2):
            factor = rng.normal(size=(4, 4))
            blocks.append(factor @ factor.T)
        state = DensityState(eta=0.3, cost_laplacian=blocks[0], cost_signless=blocks[1])
        state = ftrl_update(state)
        self.assertAlmostEqual(state.trace, 1.0, delta=1e-10)
        for block in (state.Y, state.Z):
            self.assertGreaterEqual(np.linalg.eigvalsh(block).min(), -1e-12)

    def test_commuting_history(self):
        state = DensityState(eta=0.2, cost_laplacian=2 * np.eye(3), cost_signless=np.zeros((3, 3)))
        state = ftrl_update(state)
        np.testing.assert_allclose(state.Y, state.Y[0, 0] * np.eye(3), atol=1e-14)

    def test_eigenvalue_floor(self):
        state = DensityState(eta=1.0, cost_laplacian=np.diag([1e6, 0.0, 0.0]), cost_signless=np.zeros((3, 3)))
        unfloored = ftrl_update(state)
        self.assertTrue(all(np.all(values > 0) for values, _ in unfloored.spectra))
        self.assertGreater(unfloored.quarter_powers()[1][0, 0], 1e-4)
        with self.settings(SPARSIFY={**settings.SPARSIFY, 'EIGEN_FLOOR': 1e-10}):
            floored = ftrl_update(state)
            quarter_y, quarter_z = floored.quarter_powers()
        self.assertEqual(sum(int(np.sum(values == 0)) for values, _ in floored.spectra), 5)
        self.assertAlmostEqual(floored.trace, 1.0, delta=1e-10)
        np.testing.assert_allclose(quarter_y, np.diag([1.0, 0.0, 0.0]), atol=1e-9)
        np.testing.assert_array_equal(quarter_z, np.zeros((3, 3)))


    def test_symmetric_state_picks_first_edge(self):
        graph = complete_graph(4)
        uniform = np.eye(4) / 8
        index = select_edge(graph, uniform, uniform)
        self.assertEqual(graph.edges[index].tolist(), [0, 1])

    def test_avoids_aligned_edge(self):
        graph = path_graph(3)
        direction = np.array([0.0, 1.0, -1.0]) / math.sqrt(2)
        index = select_edge(graph, np.outer(direction, direction), np.zeros((3, 3)))
        self.assertEqual(graph.edges[index].tolist(), [0, 1])

    def test_single_and_empty_edge_sets(self):
        self.assertEqual(select_edge(Graph(2, [(0, 1)]), np.eye(2) / 4, np.eye(2) / 4), 0)
        with self.assertRaises(InvalidInstanceError):
            select_edge(Graph(2, []), np.eye(2) / 4, np.eye(2) / 4)

    def test_long_game_keeps_everything(self):
        graph = complete_graph(8)
        result = det_sparsify(graph, 0.5)
        self.assertTrue(result.metadata['trivial'])
        self.assertEqual(result.size, graph.m)
        self.assertEqual(result.scale, 1.0)

    def test_played_game(self):
        graph = complete_graph(16)
        result = det_sparsify(graph, 1.0, c_t=1)
        metadata = result.metadata
        self.assertEqual(metadata['T'], 16)
        self.assertEqual(result.size, 16)
        self.assertAlmostEqual(result.scale, 120 / 16)
        self.assertLessEqual(metadata['max_trace_error'], 1e-8)
        self.assertGreaterEqual(metadata['min_eigenvalue'], -1e-8)
        self.assertLessEqual(metadata['max_payoff'], 1e-8)
        self.assertLessEqual(metadata['kappa'], 8)
        # trace(c D_F) = trace(D_G)
        self.assertAlmostEqual(result.scale * 2 * result.size, 2 * graph.m)
        again = det_sparsify(graph, 1.0, c_t=1)
        np.testing.assert_array_equal(result.edge_indices, again.edge_indices)

    def test_learning_rate_caps_epsilon(self):
        self.assertAlmostEqual(learning_rate(0.1, 15, 120, 4.0), 0.1 / (4 * math.sqrt(1800)))
        self.assertAlmostEqual(learning_rate(1.0, 15, 120, 4.0), 0.25 / (4 * math.sqrt(1800)))
        metadata = det_sparsify(complete_graph(16), 1.0, c_t=1).metadata
        self.assertEqual(metadata['clamped_epsilon'], 0.25)
        self.assertAlmostEqual(metadata['eta'], learning_rate(1.0, 15, 120, 4.0))

    def test_uncapped_learning_rate_breaks_width(self):
        graph = complete_graph(16)
        with self.assertRaises(WidthConditionViolated) as raised:
            play_game(graph, 16, 1.0 / (4 * math.sqrt(graph.d_max * graph.m)))
        self.assertEqual(raised.exception.step, 0)
        self.assertGreater(raised.exception.width, 0.25)


    def test_limits(self):
        with self.assertRaises(SizeLimitExceeded):
            det_sparsify(complete_graph(8), 0.5, max_vertices=4)
        with self.assertRaises(InvalidInstanceError):
            det_sparsify(Graph(2, [(0, 1)], weights=[3.0]), 0.5)


class ResistanceTest(SimpleTestCase):
    """Tests for effective resistances and the sampling plan"""

    def test_tree(self):
        table = effective_resistances(path_graph(5))
        np.testing.assert_allclose(table.edge_resistances, np.ones(4))

    def test_triangle(self):
        table = effective_resistances(complete_graph(3))
        np.testing.assert_allclose(table.edge_resistances, np.full(3, 2 / 3), atol=1e-9)
        self.assertAlmostEqual(table.edge_resistances.sum(), 2.0)

    def test_components(self):
        table = effective_resistances(two_triangles())
        self.assertEqual(table.component_count, 2)
        self.assertAlmostEqual(table.edge_resistances.sum(), 4.0)
        with self.assertRaises(MissingResistanceError):
            table.pair(0, 3)

    def test_hyperedge_resistances(self):
        table = resistance_table(Hypergraph(3, [[0, 1, 2]]))
        self.assertAlmostEqual(table.hyperedge_values[0], 2 / 3)
        pair_table = resistance_table(Hypergraph(3, [[0, 1], [1, 2]]))
        self.assertEqual(pair_table.hyperedge_values[0], pair_table.pair(0, 1))
        with self.assertRaises(MissingResistanceError):
            hyperedge_resistances(Hypergraph(3, [[0, 1, 2]]), effective_resistances(path_graph(3)))

    @hypothesis_settings(max_examples=25, deadline=None)
    @given(st.integers(3, 10), st.integers(0, 10000))
    def test_adding_an_edge_never_increases_resistance(self, n, seed):
        graph = random_gnp_graph(n, 0.4, seed=seed)
        rng = np.random.default_rng(seed)
        a, b = rng.choice(n, size=2, replace=False)
        bigger = Graph(n, np.vstack([graph.edges, [[a, b]]]))
        before = effective_resistances(graph).edge_resistances
        after = effective_resistances(bigger).edge_resistances[:graph.m]
        self.assertTrue(np.all(after <= before + 1e-9))

    def test_round_probability(self):
        self.assertEqual(round_probability(0.3), 0.5)
        self.assertEqual(round_probability(0.25), 0.25)
        self.assertEqual(round_probability(2.0), 1.0)
        self.assertEqual(round_probability(math.inf), 1.0)

    def test_graph_plan_has_one_bucket(self):
        graph = complete_graph(6)
        plan = build_plan(graph, effective_resistances(graph), 0.5, c_l=3.0)
        self.assertEqual(len(plan.buckets), 1)
        bucket = plan.buckets[0]
        self.assertEqual(bucket.epsilon, 0.5)
        self.assertAlmostEqual(bucket.threshold, 3.0 * 0.25 / (16 * math.log(6)))

    def test_plan_invariants(self):
        hypergraph = random_rank_hypergraph(8, 30, 3, seed=4, weighted=True)
        table = resistance_table(hypergraph)
        plan = build_plan(hypergraph, table, 0.5, c_l=1e4)
        exponents = np.log2(plan.probabilities)
        np.testing.assert_array_equal(exponents, np.round(exponents))
        self.assertTrue(np.any(plan.probabilities < 1))
        for bucket in plan.buckets:
            for e in bucket.members:
                self.assertGreaterEqual(plan.probabilities[e], min(1.0, table.hyperedge_values[e] / bucket.threshold))
        self.assertLessEqual(plan.expected_size, plan.doubling_bound(table.hyperedge_values) + 1e-9)

    def test_certain_plan_keeps_everything(self):
        hypergraph = random_rank_hypergraph(8, 20, 4, seed=1)
        plan = build_plan(hypergraph, resistance_table(hypergraph), 0.5, c_l=1e-6)
        self.assertEqual(sample_sparsifier(hypergraph, plan, seed=3), hypergraph)

    def test_sampling_is_unbiased(self):
        hypergraph = random_rank_hypergraph(8, 30, 3, seed=4, weighted=True)
        plan = build_plan(hypergraph, resistance_table(hypergraph), 0.5, c_l=1e4)
        weights, p = hypergraph.weights, plan.probabilities
        runs = 400
        totals = [float(sample_sparsifier(hypergraph, plan, seed).weights.sum()) for seed in range(runs)]
        variance = float(np.sum(weights ** 2 * (1 - p) / p))
        self.assertLessEqual(abs(np.mean(totals) - weights.sum()), 4 * math.sqrt(variance / runs))

    def test_sampling_is_seeded(self):
        hypergraph = random_rank_hypergraph(8, 30, 3, seed=4)
        plan = build_plan(hypergraph, resistance_table(hypergraph), 0.5, c_l=1e4)
        np.testing.assert_array_equal(sampled_indices(plan, 7), sampled_indices(plan, 7))

    def test_sparsify_hypergraph_metadata(self):
        hypergraph = random_rank_hypergraph(8, 30, 4, seed=2)
        result, plan = sparsify_hypergraph(hypergraph, 0.3, seed=1)
        self.assertEqual(result.scale, 1.0)
        self.assertIn('size_constant', result.metadata)
        self.assertEqual(len(result.metadata['probabilities']), result.size)

    def test_default_constant_subsamples(self):
        hypergraph = random_rank_hypergraph(14, 300, 4, seed=0)
        plan = build_plan(hypergraph, resistance_table(hypergraph), 0.3)
        self.assertEqual(plan.c_l, settings.SPARSIFY['C_L'])
        self.assertLess(plan.expected_size, hypergraph.m)
        self.assertLess(plan.probabilities.min(), 1.0)



class SandwichTest(SimpleTestCase):
    """Tests for the clique bounds of hyperedge terms"""

    def test_pairs_are_tight(self):
        bounds = sandwich_bounds(Hypergraph(3, [[0, 2]]), np.array([0.3, 5.0, -1.0]))
        self.assertAlmostEqual(bounds.lower, bounds.value)
        self.assertAlmostEqual(bounds.value, bounds.upper)

    def test_indicator_bounds(self):
        k = 5
        hypergraph = Hypergraph(k, [list(range(k))])
        for j in range(1, k):
            x = np.zeros(k)
            x[:j] = 1.0
            bounds = sandwich_bounds(hypergraph, x)
            self.assertEqual(bounds.value, 1.0)
            self.assertAlmostEqual(bounds.upper, 2 / k * j * (k - j))
            self.assertAlmostEqual(bounds.lower, 2 / (k * (k - 1)) * j * (k - j))

    def test_random_directions(self):
        hypergraph = random_rank_hypergraph(10, 40, 4, seed=6, weighted=True)
        rng = np.random.default_rng(6)
        for _ in range(200):
            x = rng.normal(size=10)
            bounds = sandwich_bounds(hypergraph, x)
            self.assertAlmostEqual(bounds.value, hypergraph_quadratic(hypergraph, x))

    def test_aggregate_for_uniform_sizes(self):
        hypergraph = random_uniform_hypergraph(10, 30, 4, seed=2)
        x = np.random.default_rng(2).normal(size=10)
        bounds = sandwich_bounds(hypergraph, x)
        self.assertIsNotNone(bounds.aggregate)
        self.assertLessEqual(bounds.aggregate[0], bounds.value + 1e-9)
        self.assertLessEqual(bounds.value, bounds.aggregate[1] + 1e-9)

    def test_wrong_shape_is_invalid_instance(self):
        with self.assertRaises(InvalidInstanceError):
            sandwich_bounds(Hypergraph(3, [[0, 1, 2]]), np.zeros(4))



class RunConfigTest(SimpleTestCase):
    """Tests for run configuration resolution"""

    def test_seed_required_for_randomized_commands(self):
        with self.assertRaises(ValueError):
            RunConfig.resolve('sparsify_cut', 0.5)

    def test_epsilon_range(self):
        for epsilon in (0.0, 1.5, float('nan')):
            with self.assertRaises(InvalidInstanceError):
                RunConfig.resolve('sparsify_det', epsilon)

    def test_overrides(self):
        config = RunConfig.resolve('sparsify_det', 0.5, c_t=2)
        self.assertEqual(config.c_t, 2.0)
        self.assertEqual(config.eta_constant, 4.0)
        self.assertIsNone(config.seed)

    def test_settings_block(self):
        with self.settings(SPARSIFY={**settings.SPARSIFY, 'C_ITER': 50.0}):
            self.assertEqual(RunConfig.resolve('sparsify_cut', 0.5, seed=1).c_iter, 50.0)

    def test_environment_overrides(self):
        with mock.patch.dict(os.environ, {'SPARSIFY_C_ITER': '50', 'SPARSIFY_RESAMPLE_RETRIES': '5'}):
            resolved = _from_environment({'C_ITER': 200.0, 'RESAMPLE_RETRIES': 3, 'C_T': 16.0})
        self.assertEqual(resolved, {'C_ITER': 50.0, 'RESAMPLE_RETRIES': 5, 'C_T': 16.0})

    def test_sweep_parsing(self):
        self.assertEqual(parse_sweep('c_l=1,10'), ('c_l', [1.0, 10.0]))
        self.assertEqual(parse_sweep('resample-retries=2'), ('resample_retries', [2]))
        with self.assertRaises(ValueError):
            parse_sweep('bogus=1')


class CommandTestMixin:
    def setUp(self):
        self.workspace = tempfile.TemporaryDirectory()
        self.root = Path(self.workspace.name)

    def tearDown(self):
        self.workspace.cleanup()

    def write(self, name, instance_or_text):
        path = self.root / name
        text = instance_or_text if isinstance(instance_or_text, str) else serialize(instance_or_text)
        path.write_text(text)
        return str(path)

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue()

    def call_allowing_failed_certificate(self, *args):
        try:
            return self.call(*args)
        except CommandError as exc:
            if exc.returncode != 1:
                raise
            return None


class CommandTest(CommandTestMixin, SimpleTestCase):
    """Tests for the sparsify, stats and calibrate commands"""

    def test_cut_without_halving_returns_input(self):
        source = self.write('k5.txt', complete_graph(5))
        output, report = str(self.root / 'out.txt'), str(self.root / 'report.json')
        self.call('sparsify_cut', source, '--epsilon', '1', '--seed', '7', '--output', output, '--report', report)
        loaded = load_instance(output)
        self.assertEqual(loaded.scale, 1.0)
        self.assertEqual(loaded.instance, complete_graph(5))
        payload = json.loads(Path(report).read_text())
        self.assertTrue(payload['passed'])
        self.assertEqual(payload['config']['seed'], 7)
        self.assertTrue(label_map_path(output).exists())

    def test_spectral_and_det_pipelines(self):
        source = self.write('k6.txt', complete_graph(6))
        stdout = self.call('sparsify_spectral', source, '--epsilon', '0.5', '--seed', '1', '--json')
        self.assertTrue(json.loads(stdout)['passed'])
        stdout = self.call('sparsify_det', source, '--epsilon', '0.5', '--json')
        payload = json.loads(stdout)
        self.assertTrue(payload['passed'])
        self.assertEqual(payload['output_size'], 15)

    def test_hyper_pipeline_is_reproducible(self):
        source = self.write('h.txt', random_rank_hypergraph(8, 30, 3, seed=2, weighted=True))
        output, report = str(self.root / 'out.txt'), str(self.root / 'report.json')
        args = (
            'sparsify_hyper', source, '--epsilon', '0.5', '--seed', '99', '--c-l', '10000',
            '--trials', '300', '--output', output, '--report', report,
        )
        self.call_allowing_failed_certificate(*args)
        first = (Path(output).read_bytes(), Path(report).read_bytes())
        self.call_allowing_failed_certificate(*args)
        self.assertEqual(first, (Path(output).read_bytes(), Path(report).read_bytes()))

    def test_labels_are_written(self):
        source = self.write('labelled.txt', 'h 4 2\nalice bob carol\nbob dave\n')
        output = str(self.root / 'out.txt')
        self.call('sparsify_cut', source, '--epsilon', '1', '--seed', '1', '--output', output)
        self.assertEqual(
            json.loads(label_map_path(output).read_text()), ['alice', 'bob', 'carol', 'dave']
        )

    def test_format_error_exit_code(self):
        source = self.write('bad.txt', 'g 3 2\n0 1\n1 x y z\n')
        err = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('sparsify_det', source, '--epsilon', '0.5', stdout=StringIO(), stderr=err)
        self.assertEqual(caught.exception.returncode, 2)
        error = json.loads(err.getvalue())
        self.assertEqual(error['error'], 'GraphFormatError')
        self.assertEqual(error['line'], 3)

    def test_missing_seed_exit_code(self):
        source = self.write('k4.txt', complete_graph(4))
        with self.assertRaises(CommandError) as caught:
            self.call('sparsify_hyper', source, '--epsilon', '0.5')
        self.assertEqual(caught.exception.returncode, 2)

    def test_weighted_input_rejected(self):
        source = self.write('weighted.txt', 'g 3 2\n0 1 2.5\n1 2\n')
        for command in ('sparsify_det', 'sparsify_spectral', 'sparsify_cut'):
            with self.assertRaises(CommandError) as caught:
                self.call(command, source, '--epsilon', '0.5', '--seed', '1')
            self.assertEqual(caught.exception.returncode, 2)

    def test_stats(self):
        source = self.write('triangles.txt', two_triangles())
        payload = json.loads(self.call('stats', source, '--json'))
        self.assertEqual(payload['n'], 6)
        self.assertEqual(payload['m'], 6)
        self.assertEqual(payload['components'], 2)
        self.assertTrue(payload['simple'])
        self.assertFalse(payload['relabelled'])

    def test_calibrate(self):
        source = self.write('h.txt', random_rank_hypergraph(6, 12, 3, seed=5))
        stdout = self.call(
            'calibrate', source, '--epsilon', '0.5', '--seed', '3', '--construction', 'sparsify_hyper',
            '--runs', '3', '--sweep', 'c_l=1e-6,1000', '--trials', '200', '--json',
        )
        payload = json.loads(stdout)
        self.assertEqual(len(payload['summaries']), 2)
        self.assertEqual(payload['summaries'][0]['runs'], 3)
        self.assertEqual(payload['summaries'][0]['pass_fraction'], 1.0)
        self.assertIn(payload['recommended'], (1e-6, 1000.0))

    def test_recommended_value(self):
        summaries = [
            {'value': 1.0, 'pass_fraction': 1.0},
            {'value': 30.0, 'pass_fraction': 1.0},
            {'value': 100.0, 'pass_fraction': 0.8},
        ]
        self.assertEqual(recommended_value(summaries), 30.0)
        self.assertEqual(recommended_value(summaries, required_fraction=0.75), 100.0)
        self.assertIsNone(recommended_value(summaries[2:]))
        self.assertIsNone(recommended_value([{'value': None, 'pass_fraction': 1.0}]))



class RecordedRunTest(CommandTestMixin, TestCase):
    """Tests for runs stored with --record"""

    def test_successful_run_is_recorded(self):
        source = self.write('k5.txt', complete_graph(5))
        self.call('sparsify_cut', source, '--epsilon', '1', '--seed', '7', '--record')
        run = SparsifierRun.objects.get()
        self.assertEqual(run.state, 'completed')
        self.assertTrue(run.passed)
        self.assertEqual(run.seed, '7')
        self.assertEqual(run.output_size, 10)
        self.assertEqual(run.compression, 1.0)
        self.assertIsNotNone(run.duration)
        self.assertEqual(run.quality_report.guarantee, 'cut')
        self.assertTrue(run.quality_report.passed)

    def test_failed_run_is_recorded(self):
        with self.assertRaises(CommandError):
            self.call('sparsify_det', str(self.root / 'missing.txt'), '--epsilon', '0.5', '--record')
        run = SparsifierRun.objects.get()
        self.assertEqual(run.state, 'failed')
        self.assertIn('FileNotFoundError', run.error)
        self.assertIn('Deterministic', str(run))

    def test_laplacian_of_recorded_output(self):
        source = self.write('k6.txt', complete_graph(6))
        output = str(self.root / 'out.txt')
        self.call('sparsify_det', source, '--epsilon', '0.5', '--output', output, '--record')
        loaded = load_instance(output)
        np.testing.assert_allclose(laplacian(loaded.instance).L, laplacian(complete_graph(6)).L)
        self.assertEqual(SparsifierRun.objects.get().output_path, output)
