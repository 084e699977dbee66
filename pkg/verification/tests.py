import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from hypergraphs.exceptions import InvalidInstanceError, SizeLimitExceeded
from hypergraphs.formats import serialize
from hypergraphs.generators import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_gnp_graph,
    random_rank_hypergraph,
    random_regular_graph,
)
from hypergraphs.structures import Graph, Hypergraph
from sparsifiers.game import det_sparsify
from sparsifiers.models import SparsifierRun
from sparsifiers.spectral import sample_sparsifier, sparsify_hypergraph

from .certificates import (
    additive_cut_bound,
    bilateral_certificate,
    brute_force_cut_check,
    core_event_certificate,
    degree_cut_bound,
    det_certificate,
    hypergraph_multiplicative_check,
    resistance_identities_check,
    sampled_cut_check,
    spectral_additive_check,
)
from .checks import certify, edge_indices_of, spectral_slack
from .models import QualityReportRecord
from .reports import PASS_TOLERANCE, QualityReport


def bridged_triangles():
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_subgraph(graph, seed, keep=0.5):
    rng = np.random.default_rng(seed)
    return graph.select(np.flatnonzero(rng.random(graph.m) < keep))


class CutCertificateTest(SimpleTestCase):
    """Tests for the exhaustive and sampled cut checks"""

    def test_identical_sparsifier(self):
        graph = path_graph(5)
        report = brute_force_cut_check(graph, graph, 1.0, additive_cut_bound(0.1, graph), epsilon=0.1)
        self.assertEqual(report.worst_value, 0.0)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['subsets'], 32)

    def test_empty_sparsifier_reports_max_cut(self):
        graph = path_graph(4)
        report = brute_force_cut_check(graph, Graph(4, []), 1.0, degree_cut_bound(0.1, graph))
        self.assertEqual(report.worst_value, 3.0)
        self.assertFalse(report.passed)

    def test_bridge_deletion_witness(self):
        graph = bridged_triangles()
        sparse = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        report = brute_force_cut_check(graph, sparse, 1.0, degree_cut_bound(0.01, graph))
        self.assertFalse(report.passed)
        self.assertEqual(report.worst_value, 1.0)
        witness = set(report.witness)
        self.assertNotEqual(2 in witness, 3 in witness)

    def test_hypergraph_cuts(self):
        hypergraph = Hypergraph(4, [[0, 1, 2], [1, 2, 3]])
        report = brute_force_cut_check(
            hypergraph, hypergraph.select([0]), 2.0, degree_cut_bound(0.1, hypergraph)
        )
        # S = {3} is cut by the dropped hyperedge only
        self.assertEqual(report.worst_value, 1.0)
        self.assertFalse(report.passed)

    def test_size_limit(self):
        graph = Graph(21, [])
        with self.assertRaises(SizeLimitExceeded):
            brute_force_cut_check(graph, graph, 1.0, additive_cut_bound(0.1, graph))

    def test_sampled_check(self):
        graph = complete_graph(6)
        bound = additive_cut_bound(0.1, graph)
        kept = sampled_cut_check(graph, graph, 1.0, bound, epsilon=0.1, trials=50, seed=3)
        self.assertTrue(kept.passed)
        self.assertFalse(kept.details['exhaustive'])
        self.assertEqual(kept.details['subsets'], 56)
        dropped = sampled_cut_check(graph, Graph(6, []), 1.0, bound, epsilon=0.1, trials=50, seed=3)
        self.assertFalse(dropped.passed)

    def test_certify_falls_back_to_sampling(self):
        graph = cycle_graph(24)
        report = certify('cut', graph, graph, 1.0, 0.5, trials=100, seed=1)
        self.assertTrue(report.passed)
        self.assertFalse(report.details['exhaustive'])
        self.assertEqual(report.seeds, [1])


class SpectralCertificateTest(SimpleTestCase):
    """Tests for the additive spectral and deterministic certificates"""

    def test_identical_sparsifier(self):
        graph = complete_graph(5)
        report = spectral_additive_check(graph, graph, 1.0, 0.5)
        self.assertAlmostEqual(report.certificate_eigenvalues['upper'], 1.0)
        self.assertAlmostEqual(report.certificate_eigenvalues['lower'], 1.0)
        self.assertTrue(report.passed)

    def test_doubled_complete_graph_fails(self):
        graph = complete_graph(6)
        report = spectral_additive_check(graph, graph, 2.0, 0.5, slack=1.0)
        self.assertAlmostEqual(report.worst_value, 6.0)
        self.assertAlmostEqual(report.worst_excess, 0.2)
        self.assertFalse(report.passed)

    def test_regular_graphs_compare_norm_to_degree(self):
        epsilon = 0.5
        for seed in range(8):
            graph = random_regular_graph(12, 6, seed=seed)
            sparse = random_subgraph(graph, seed)
            report = spectral_additive_check(graph, sparse, 2.0, epsilon, slack=1.0)
            limit = 2 * epsilon * graph.d_max
            self.assertEqual(report.passed, report.worst_value <= limit * (1 + PASS_TOLERANCE))

    def test_spectral_slack(self):
        self.assertEqual(spectral_slack(2.0, 0.5), 2.0)
        self.assertAlmostEqual(spectral_slack(2.0, 0.01), 2.0 * np.log(100))

    def test_det_identical_sparsifier(self):
        graph = complete_graph(6)
        report = det_certificate(graph, graph, 1.0, 0.5)
        self.assertTrue(report.passed)
        self.assertIsNone(report.details['failing_side'])

    def test_det_repeated_edge_fails(self):
        graph = complete_graph(6)
        sparse = Graph(6, [(0, 1)] * 15)
        report = det_certificate(graph, sparse, 1.0, 0.5)
        self.assertFalse(report.passed)
        self.assertIsNotNone(report.details['failing_side'])

    def test_det_lower_side_is_the_signless_form(self):
        for seed in range(6):
            graph = random_gnp_graph(9, 0.5, seed=seed)
            sparse = random_subgraph(graph, seed, keep=0.3)
            scale = 1.0 + seed / 2
            report = det_certificate(graph, sparse, scale, 0.5, slack=2.0)
            allowance = 2.0 * 0.5 * graph.d_max
            eigenvalues = report.certificate_eigenvalues
            self.assertAlmostEqual(eigenvalues['lower_gap'], allowance - eigenvalues['signless'], places=8)

    def test_det_bundle_on_parallel_edges(self):
        graph = Graph(4, [(0, 1), (0, 1), (1, 2), (2, 3), (0, 3)])
        report = certify('det', graph, graph, 1.0, 0.5)
        self.assertTrue(report.passed)
        self.assertTrue(report.details['original_additive']['passed'])
        self.assertIn('reduced_n', report.details)

    def test_played_game_passes_det_certificate(self):
        for graph in (complete_graph(16), random_gnp_graph(24, 0.8, seed=0)):
            result = det_sparsify(graph, 1.0, c_t=1)
            self.assertFalse(result.metadata['trivial'])
            self.assertLess(result.size, graph.m)
            report = det_certificate(
                graph, result.selected(graph), result.scale, 1.0, slack=settings.SPARSIFY['CERTIFICATE_SLACK']
            )
            self.assertTrue(report.passed, report.details)



class MultiplicativeCheckTest(SimpleTestCase):
    """Tests for the hypergraph quadratic form check"""

    def test_identical_sparsifier(self):
        hypergraph = random_rank_hypergraph(8, 20, 4, seed=3)
        report = hypergraph_multiplicative_check(hypergraph, hypergraph, 0.1, trials=200)
        self.assertEqual(report.worst_value, 0.0)
        self.assertTrue(report.details['exhaustive'])

    def test_uniform_reweighting(self):
        hypergraph = random_rank_hypergraph(8, 20, 4, seed=3)
        report = hypergraph_multiplicative_check(hypergraph, hypergraph.scaled(1.15), 0.2, trials=200)
        self.assertAlmostEqual(report.worst_value, 0.15)
        self.assertTrue(report.passed)
        failing = hypergraph_multiplicative_check(hypergraph, hypergraph.scaled(1.15), 0.1, trials=200)
        self.assertFalse(failing.passed)

    def test_random_directions_only(self):
        hypergraph = random_rank_hypergraph(10, 30, 3, seed=1)
        report = hypergraph_multiplicative_check(
            hypergraph, hypergraph.scaled(0.9), 0.2, trials=100, seed=5, exhaustive_limit=4
        )
        self.assertFalse(report.details['exhaustive'])
        self.assertAlmostEqual(report.worst_value, 0.1)
        self.assertEqual(report.seeds, [5])

    def test_subsampled_sparsifier_passes(self):
        hypergraph = random_rank_hypergraph(14, 300, 4, seed=0)
        result, plan = sparsify_hypergraph(hypergraph, 0.3, seed=0, c_l=30.0)
        self.assertLess(result.size, hypergraph.m)
        sparse = sample_sparsifier(hypergraph, plan, seed=0)
        self.assertEqual(sparse.m, result.size)
        report = hypergraph_multiplicative_check(hypergraph, sparse, 0.3, trials=2000)
        self.assertTrue(report.details['exhaustive'])
        self.assertTrue(report.passed, report.worst_value)



class ResistanceIdentityTest(SimpleTestCase):
    """Tests for the effective resistance identities"""

    def test_small_graphs(self):
        for graph in (path_graph(5), complete_graph(3), bridged_triangles()):
            report = resistance_identities_check(graph, triples=2000)
            self.assertTrue(report.passed, report.witness)

    def test_component_sums(self):
        graph = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        report = resistance_identities_check(graph, triples=2000)
        self.assertEqual(report.details['components'], 2)
        for total in report.details['component_sums'].values():
            self.assertAlmostEqual(total, 2.0)

    @hypothesis_settings(max_examples=20, deadline=None)
    @given(st.integers(3, 12), st.integers(0, 10000))
    def test_random_graphs(self, n, seed):
        report = resistance_identities_check(random_gnp_graph(n, 0.4, seed=seed), triples=500, seed=seed)
        self.assertTrue(report.passed, report.witness)


class HalvingCertificateTest(SimpleTestCase):
    """Tests for the halving event certificates"""

    def test_alternating_cycle_edges(self):
        graph = cycle_graph(4)
        kept = graph.select([e for e, (a, b) in enumerate(graph.edges.tolist()) if a % 2 == 0 and b == a + 1])
        self.assertEqual(kept.m, 2)
        self.assertTrue(core_event_certificate(graph, kept, threshold_constant=1.0).passed)
        self.assertTrue(bilateral_certificate(graph, kept, threshold_constant=1.0).passed)

    def test_full_edge_set_is_not_a_halving(self):
        graph = complete_graph(4)
        report = core_event_certificate(graph, graph, threshold_constant=0.1)
        self.assertFalse(report.passed)
        self.assertEqual(len(report.witness), 1)
        self.assertFalse(bilateral_certificate(graph, graph, threshold_constant=0.1).passed)


class QualityReportTest(SimpleTestCase):
    """Tests for QualityReport"""

    def report(self, excess, witness=None, **kwargs):
        return QualityReport('cut', 0.5, 2.0, worst_excess=excess, witness=witness, **kwargs)

    def test_tolerance(self):
        self.assertTrue(self.report(PASS_TOLERANCE / 2).passed)
        self.assertFalse(self.report(PASS_TOLERANCE * 2).passed)

    def test_numpy_values_serialize(self):
        report = self.report(
            np.float64(-0.5),
            witness=np.array([1, 2]),
            details={'count': np.int64(3), 'flag': np.bool_(True)},
        )
        payload = json.loads(report.to_json())
        self.assertEqual(payload['witness'], [1, 2])
        self.assertEqual(payload['details'], {'count': 3, 'flag': True})
        self.assertTrue(payload['passed'])

    def test_merge_is_commutative_and_associative(self):
        reports = [
            self.report(-0.3, witness=[0], details={'subsets': 4}, seeds=[1]),
            self.report(0.2, witness=[1, 2], details={'subsets': 8}, seeds=[2]),
            self.report(0.2, witness=[0, 3], details={'subsets': 2}, seeds=[3]),
        ]
        a, b, c = reports
        self.assertEqual(a.merge(b).as_dict(), b.merge(a).as_dict())
        self.assertEqual(a.merge(b).merge(c).as_dict(), a.merge(b.merge(c)).as_dict())
        merged = a.merge(b).merge(c)
        self.assertEqual(merged.witness, [0, 3])
        self.assertEqual(merged.details['subsets'], 8)
        self.assertEqual(merged.seeds, [1, 2, 3])
        self.assertFalse(merged.passed)

    def test_tie_goes_to_smaller_witness(self):
        left, right = self.report(0.1, witness=[2]), self.report(0.1, witness=[0, 1])
        self.assertEqual(left.merge(right).witness, [0, 1])

    def test_mismatched_guarantees(self):
        with self.assertRaises(ValueError):
            self.report(0.0).merge(QualityReport('det', 0.5, 2.0, worst_excess=0.0))


class CertifyTest(SimpleTestCase):
    """Tests for certify and the edge mapping used by verify"""

    def test_parallel_edges_map_to_copies(self):
        graph = Graph(3, [(0, 1), (0, 1), (1, 2)])
        selected = Graph(3, [(0, 1), (0, 1), (0, 1)])
        self.assertEqual(edge_indices_of(graph, selected).tolist(), [0, 1, 0])
        with self.assertRaises(InvalidInstanceError):
            edge_indices_of(graph, Graph(3, [(0, 2)]))

    def test_errors(self):
        graph = complete_graph(4)
        with self.assertRaises(ValueError):
            certify('bogus', graph, graph, 1.0, 0.5)
        with self.assertRaises(InvalidInstanceError):
            certify('cut', graph, complete_graph(5), 1.0, 0.5)
        with self.assertRaises(InvalidInstanceError):
            certify('spectral', Hypergraph(3, [[0, 1, 2]]), Hypergraph(3, [[0, 1, 2]]), 1.0, 0.5)

    def test_hyper_guarantee_on_a_graph(self):
        graph = complete_graph(5)
        report = certify('hyper', graph, graph, 1.0, 0.1, trials=100)
        self.assertEqual(report.guarantee, 'hyper')
        self.assertTrue(report.passed)


class VerifyCommandTest(SimpleTestCase):
    """Tests for the verify command"""

    def setUp(self):
        self.workspace = tempfile.TemporaryDirectory()
        self.root = Path(self.workspace.name)
        self.source = self.root / 'k6.txt'
        self.source.write_text(serialize(complete_graph(6)))

    def tearDown(self):
        self.workspace.cleanup()

    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def test_untouched_bundles_verify(self):
        for command, guarantee in (('sparsify_cut', 'cut'), ('sparsify_spectral', 'spectral'), ('sparsify_det', 'det')):
            output = str(self.root / f'{command}.txt')
            self.call(command, str(self.source), '--epsilon', '0.5', '--seed', '1', '--output', output)
            payload = json.loads(self.call(
                'verify', str(self.source), output, '--guarantee', guarantee, '--epsilon', '0.5', '--json'
            ))
            self.assertTrue(payload['passed'], guarantee)
            self.assertEqual(payload['scale'], 1.0)

    def test_empty_sparsifier_fails(self):
        empty = self.root / 'empty.txt'
        empty.write_text('# scale c=1.0\ng 6 0\n')
        report = self.root / 'report.json'
        with self.assertRaises(CommandError) as caught:
            self.call(
                'verify', str(self.source), str(empty), '--guarantee', 'cut', '--epsilon', '0.1',
                '--report', str(report),
            )
        self.assertEqual(caught.exception.returncode, 1)
        self.assertFalse(json.loads(report.read_text())['passed'])

    def test_vertex_count_mismatch(self):
        other = self.root / 'k5.txt'
        other.write_text(serialize(complete_graph(5)))
        with self.assertRaises(CommandError) as caught:
            self.call('verify', str(self.source), str(other), '--guarantee', 'cut', '--epsilon', '0.5')
        self.assertEqual(caught.exception.returncode, 2)


class QualityReportRecordTest(TestCase):
    """Tests for the stored runs and reports"""

    def setUp(self):
        self.run = SparsifierRun.objects.create(
            command='sparsify_det', epsilon=0.5, input_path='k6.txt'
        )

    def test_run_lifecycle(self):
        self.assertEqual(self.run.state, 'created')
        self.run.start()
        self.assertEqual(self.run.state, 'running')
        self.run.input_size, self.run.output_size = 15, 5
        self.run.finish(passed=True)
        self.run.refresh_from_db()
        self.assertEqual(self.run.state, 'completed')
        self.assertTrue(self.run.passed)
        self.assertGreaterEqual(self.run.duration, 0.0)
        self.assertAlmostEqual(self.run.compression, 1 / 3)
        self.assertEqual(str(self.run), "Deterministic sparsifier eps=0.5 (completed)")

    def test_record_replaces_report(self):
        QualityReportRecord.record(self.run, QualityReport('det', 0.5, 3.0, worst_excess=0.4))
        record = QualityReportRecord.record(self.run, QualityReport('det', 0.5, 3.0, worst_excess=-0.1))
        self.assertEqual(QualityReportRecord.objects.count(), 1)
        self.assertTrue(record.passed)
        self.assertEqual(json.loads(record.report_json)['worst_excess'], -0.1)
        self.assertEqual(str(record), f"Deterministic spectral report for run {self.run.pk} (pass)")
