import itertools
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from hypergraphs.exceptions import GraphFormatError, InvalidInstanceError, SizeLimitExceeded, UnknownEdgeError
from hypergraphs.formats import (
    label_map_path,
    load_instance,
    parse_graph,
    parse_hypergraph,
    read_graph_text,
    read_hypergraph_text,
    serialize,
    write_label_map,
)
from hypergraphs.generators import (
    complete_bipartite_graph,
    complete_graph,
    path_graph,
    random_rank_hypergraph,
    star_graph,
)
from hypergraphs.laplacians import laplacian, is_psd
from hypergraphs.reduction import lift_edges, lift_vector, reduce_graph, reduce_hypergraph
from hypergraphs.structures import (
    Graph,
    Hypergraph,
    clique_expansion,
    cross_cut,
    cut_value,
    hypergraph_cut,
    hypergraph_quadratic,
    hypergraph_quadratic_batch,
    volume,
)


@st.composite
def graphs(draw, max_n=10, max_m=30):
    n = draw(st.integers(2, max_n))
    pairs = draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]),
        max_size=max_m,
    ))
    return Graph(n, np.array(pairs, dtype=np.int64).reshape(-1, 2))


@st.composite
def hypergraphs(draw, max_n=8, max_m=12, max_rank=4):
    n = draw(st.integers(2, max_n))
    rank = min(max_rank, n)
    hyperedges = draw(st.lists(
        st.sets(st.integers(0, n - 1), min_size=2, max_size=rank).map(sorted),
        max_size=max_m,
    ))
    return Hypergraph(n, hyperedges)


def all_subsets(n):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def indicator(n, vertices):
    x = np.zeros(n)
    x[list(vertices)] = 1.0
    return x


class GraphConstructionTest(SimpleTestCase):
    """Tests for Graph and Hypergraph invariants"""

    def test_edges_are_normalized(self):
        graph = Graph(3, [(2, 0), (1, 2)])
        self.assertEqual(graph.edges.tolist(), [[0, 2], [1, 2]])
        self.assertEqual(graph.weights.tolist(), [1.0, 1.0])

    def test_rejects_self_loop_and_out_of_range(self):
        with self.assertRaises(InvalidInstanceError):
            Graph(3, [(1, 1)])
        with self.assertRaises(InvalidInstanceError):
            Graph(3, [(0, 3)])
        with self.assertRaises(InvalidInstanceError):
            Graph(3, [(0, 1)], weights=[-1.0])

    def test_handshake_identity(self):
        graph = Graph(4, [(0, 1), (1, 2), (1, 2), (2, 3)], weights=[1.0, 2.0, 0.5, 1.0])
        self.assertAlmostEqual(graph.degrees.sum(), 2 * graph.total_weight)
        self.assertFalse(graph.is_simple)
        self.assertFalse(graph.is_unweighted)

    def test_instances_are_immutable(self):
        graph = complete_graph(3)
        with self.assertRaises(ValueError):
            graph.edges[0, 0] = 2

    def test_hypergraph_rank_and_dropped_singletons(self):
        with self.assertLogs('hypergraphs.structures', 'WARNING'):
            hypergraph = Hypergraph(5, [(0, 1, 2), (3,), (1, 4)])
        self.assertEqual(hypergraph.m, 2)
        self.assertEqual(hypergraph.rank, 3)
        self.assertEqual(hypergraph.degrees.tolist(), [1.0, 2.0, 1.0, 0.0, 1.0])

    def test_hypergraph_rejects_repeated_vertex(self):
        with self.assertRaises(InvalidInstanceError):
            Hypergraph(3, [(0, 1, 1)])

    def test_select_keeps_multiplicity(self):
        graph = path_graph(3)
        chosen = graph.select([1, 1, 0])
        self.assertEqual(chosen.m, 3)
        self.assertEqual(chosen.degrees.tolist(), [1.0, 3.0, 2.0])


class LaplacianTest(SimpleTestCase):
    """Tests for laplacian"""

    def test_single_edge(self):
        bundle = laplacian(Graph(2, [(0, 1)]))
        np.testing.assert_array_equal(bundle.L, [[1, -1], [-1, 1]])
        np.testing.assert_array_equal(bundle.SL, [[1, 1], [1, 1]])

    def test_empty_graph(self):
        bundle = laplacian(Graph(3, []))
        np.testing.assert_array_equal(bundle.L, np.zeros((3, 3)))
        np.testing.assert_array_equal(bundle.SL, np.zeros((3, 3)))

    def test_triangle_spectrum(self):
        values = np.linalg.eigvalsh(laplacian(complete_graph(3)).L)
        np.testing.assert_allclose(values, [0, 3, 3], atol=1e-12)

    def test_size_limit(self):
        with self.assertRaises(SizeLimitExceeded):
            laplacian(Graph(5, []), limit=4)

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_traces_row_sums_and_psd(self, graph):
        bundle = laplacian(graph)
        self.assertAlmostEqual(np.trace(bundle.L), 2 * graph.total_weight)
        self.assertAlmostEqual(np.trace(bundle.SL), 2 * graph.total_weight)
        np.testing.assert_allclose(bundle.L @ np.ones(graph.n), 0, atol=1e-12)
        self.assertTrue(is_psd(bundle.L))
        self.assertTrue(is_psd(bundle.SL))
        top = np.linalg.eigvalsh(bundle.SL)[-1] if graph.n else 0.0
        self.assertLessEqual(top, 2 * graph.d_max + 1e-9)

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(graphs(max_n=7), st.data())
    def test_indicator_identities(self, graph, data):
        vertices = data.draw(st.sets(st.integers(0, graph.n - 1)))
        L = laplacian(graph).L
        x = indicator(graph.n, vertices)
        signed = 2 * x - 1
        cut = cut_value(graph, vertices)
        self.assertAlmostEqual(x @ L @ x, cut)
        self.assertAlmostEqual(signed @ L @ signed, 4 * cut)
        self.assertAlmostEqual(graph.quadratic_form(x), cut)


class CutFunctionalTest(SimpleTestCase):
    """Tests for cut_value, cross_cut, hypergraph_cut and volume"""

    def test_cut_value(self):
        self.assertEqual(cut_value(complete_graph(4), {0}), 3)
        self.assertEqual(cut_value(path_graph(4), {1, 2}), 2)
        self.assertEqual(cut_value(complete_graph(4), set()), 0)
        with self.assertRaises(InvalidInstanceError):
            cut_value(complete_graph(4), {4})

    def test_cross_cut(self):
        self.assertEqual(cross_cut(complete_graph(3), {0}, {1}), 1)
        self.assertEqual(cross_cut(complete_graph(3), set(), {1}), 0)
        self.assertEqual(cross_cut(complete_bipartite_graph(2, 3), {0, 1}, {2, 3, 4}), 6)
        with self.assertRaises(InvalidInstanceError):
            cross_cut(complete_graph(3), {0, 1}, {1, 2})

    def test_hypergraph_cut(self):
        self.assertEqual(hypergraph_cut(Hypergraph(3, [(0, 1, 2)]), {0}), 1)
        triples = Hypergraph(4, list(itertools.combinations(range(4), 3)))
        self.assertEqual(hypergraph_cut(triples, {0, 1}), 4)
        self.assertEqual(hypergraph_cut(triples, set()), 0)

    def test_volume(self):
        graph = path_graph(5)
        self.assertEqual(volume(graph, range(5)), 2 * graph.m)
        self.assertEqual(volume(graph, []), 0)
        self.assertEqual(volume(star_graph(4), {0}), 4)


class HypergraphQuadraticTest(SimpleTestCase):
    """Tests for hypergraph_quadratic and clique_expansion"""

    def test_max_gap(self):
        hypergraph = Hypergraph(3, [(0, 1, 2)])
        self.assertAlmostEqual(hypergraph_quadratic(hypergraph, [0, 0.5, 2]), 4)
        self.assertEqual(hypergraph_quadratic(hypergraph, [3, 3, 3]), 0)
        with self.assertRaises(InvalidInstanceError):
            hypergraph_quadratic(hypergraph, [0, 1])

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(hypergraphs())
    def test_indicator_equals_cut(self, hypergraph):
        for vertices in all_subsets(hypergraph.n):
            self.assertAlmostEqual(
                hypergraph_quadratic(hypergraph, indicator(hypergraph.n, vertices)),
                hypergraph_cut(hypergraph, vertices),
            )

    def test_batch_matches_single(self):
        hypergraph = random_rank_hypergraph(9, 40, 4, seed=3, weighted=True)
        vectors = np.random.default_rng(0).normal(size=(2500, 9))
        expected = [hypergraph_quadratic(hypergraph, x) for x in vectors]
        np.testing.assert_allclose(hypergraph_quadratic_batch(hypergraph, vectors), expected)

    def test_clique_expansion(self):
        self.assertEqual(clique_expansion(Hypergraph(4, [(0, 1, 2, 3)])).m, 6)
        expanded = clique_expansion(Hypergraph(4, [(0, 1, 2), (1, 2, 3)]))
        self.assertEqual(expanded.m, 6)
        self.assertEqual(sum(1 for row in expanded.edges.tolist() if row == [1, 2]), 2)
        self.assertEqual(expanded.provenance.tolist(), [0, 0, 0, 1, 1, 1])

    def test_clique_expansion_of_graph_is_identity(self):
        graph = path_graph(5)
        self.assertEqual(clique_expansion(Hypergraph.from_graph(graph)), graph)

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(hypergraphs(max_n=9, max_rank=6))
    def test_clique_expansion_edge_count(self, hypergraph):
        expected = sum(math.comb(len(e), 2) for e in hypergraph.hyperedges)
        self.assertEqual(clique_expansion(hypergraph).m, expected)


class ReductionTest(SimpleTestCase):
    """Tests for the cloud reduction"""

    def test_star(self):
        reduced, mapping = reduce_graph(star_graph(4))
        self.assertEqual(mapping.degree_cap, 2)
        self.assertEqual(reduced.n, 6)
        self.assertEqual(mapping.cloud_of(0), [0, 1])
        self.assertEqual(reduced.degrees[:2].tolist(), [2.0, 2.0])
        x = lift_vector(mapping, indicator(5, {0}))
        self.assertEqual(x.tolist(), [1, 1, 0, 0, 0, 0])
        self.assertEqual(laplacian(reduced).L.dot(x).dot(x), 4)
        self.assertEqual(lift_edges(mapping, [3, 1]).tolist(), [3, 1])

    def test_singleton_clouds_are_identity(self):
        graph = complete_graph(5)
        reduced, mapping = reduce_graph(graph)
        self.assertTrue(mapping.is_identity)
        self.assertEqual(reduced, graph)
        x = np.arange(5.0)
        np.testing.assert_array_equal(lift_vector(mapping, x), x)

    def test_single_edge(self):
        reduced, mapping = reduce_graph(Graph(2, [(0, 1)]))
        self.assertEqual(reduced, Graph(2, [(0, 1)]))
        self.assertEqual(lift_edges(mapping, []).tolist(), [])

    def test_unknown_edge(self):
        _, mapping = reduce_graph(star_graph(4))
        with self.assertRaises(UnknownEdgeError):
            lift_edges(mapping, [4])

    def test_hypergraph_vertex_splits(self):
        hypergraph = Hypergraph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
        reduced, mapping = reduce_hypergraph(hypergraph)
        self.assertEqual(len(mapping.cloud_of(0)), 2)
        self.assertEqual(reduced.degrees[mapping.cloud_of(0)].tolist(), [2.0, 2.0])

    def test_regular_hypergraph_is_unchanged(self):
        hypergraph = Hypergraph(4, list(itertools.combinations(range(4), 3)))
        reduced, mapping = reduce_hypergraph(hypergraph)
        self.assertTrue(mapping.is_identity)
        self.assertEqual(reduced, hypergraph)

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(graphs(max_n=12, max_m=60), st.data())
    def test_transfer_identities(self, graph, data):
        if graph.m == 0:
            return
        reduced, mapping = reduce_graph(graph)
        cap = mapping.degree_cap
        self.assertLessEqual(reduced.d_max, cap)
        x = np.array(data.draw(st.lists(
            st.floats(-10, 10, allow_nan=False), min_size=graph.n, max_size=graph.n,
        )))
        lifted = lift_vector(mapping, x)
        original = laplacian(graph)
        image = laplacian(reduced)
        self.assertTrue(math.isclose(x @ original.L @ x, lifted @ image.L @ lifted, rel_tol=1e-10, abs_tol=1e-9))
        self.assertTrue(math.isclose(x @ original.SL @ x, lifted @ image.SL @ lifted, rel_tol=1e-10, abs_tol=1e-9))
        self.assertLessEqual(
            cap * (lifted @ lifted),
            cap * (x @ x) + x @ original.D @ x + 1e-10 * (1 + abs(x @ x)),
        )

    @hypothesis_settings(max_examples=20, deadline=None)
    @given(hypergraphs(max_n=7))
    def test_hypergraph_cut_transfer(self, hypergraph):
        if hypergraph.m == 0:
            return
        reduced, mapping = reduce_hypergraph(hypergraph)
        cap = mapping.degree_cap
        self.assertLessEqual(reduced.d_max, cap)
        for vertices in all_subsets(hypergraph.n):
            lifted = mapping.lift_set(vertices)
            self.assertEqual(hypergraph_cut(hypergraph, vertices), hypergraph_cut(reduced, lifted))
            self.assertLessEqual(cap * len(lifted), cap * len(vertices) + volume(hypergraph, vertices))

    def test_degree_spread_is_bounded(self):
        for seed in range(5):
            hypergraph = random_rank_hypergraph(30, 120, 4, seed=seed)
            reduced, _ = reduce_hypergraph(hypergraph)
            self.assertLessEqual(reduced.d_max, 4 * reduced.d_avg)


class FormatTest(SimpleTestCase):
    """Tests for the text formats"""

    def test_single_edge(self):
        loaded = read_graph_text("g 2 1\n0 1\n")
        self.assertEqual(loaded.instance, Graph(2, [(0, 1)]))
        self.assertIsNone(loaded.scale)

    def test_weighted_edge(self):
        graph = read_graph_text("g 2 1\n0 1 2.5\n").instance
        self.assertEqual(graph.weights.tolist(), [2.5])

    def test_repeated_vertex_names_the_line(self):
        with self.assertRaises(GraphFormatError) as raised:
            read_hypergraph_text("h 3 2\n0 1\n# comment\n0 2 2\n")
        self.assertEqual(raised.exception.line_number, 4)
        self.assertIn('line 4', str(raised.exception))

    def test_out_of_range_and_malformed(self):
        with self.assertRaises(GraphFormatError):
            read_graph_text("g 2 1\n0 2\n")
        with self.assertRaises(GraphFormatError):
            read_graph_text("g 2 1\n0\n")
        with self.assertRaises(GraphFormatError):
            read_graph_text("g 2 2\n0 1\n")
        with self.assertRaises(GraphFormatError):
            read_graph_text("h 2 1\n0 1\n")

    def test_labels_are_remapped(self):
        loaded = read_graph_text("g 4 2\nalice bob\nbob carol\n")
        self.assertEqual(loaded.labels, ['alice', 'bob', 'carol', None])
        self.assertEqual(loaded.instance.edges.tolist(), [[0, 1], [1, 2]])

    def test_one_based_file_is_rejected_as_out_of_range(self):
        with self.assertRaises(GraphFormatError) as raised:
            read_graph_text("g 3 2\n1 2\n2 3\n")
        self.assertEqual(raised.exception.line_number, 3)
        self.assertIn('0-based', str(raised.exception))

    def test_negative_index_is_rejected(self):
        with self.assertRaises(GraphFormatError) as raised:
            read_graph_text("g 3 2\n0 1\n-1 2\n")
        self.assertEqual(raised.exception.line_number, 3)
        self.assertIn('negative vertex index -1', str(raised.exception))
        with self.assertRaises(GraphFormatError):
            read_hypergraph_text("h 3 1\n0 -2 1\n")


    def test_hyperedge_weights(self):
        hypergraph = read_hypergraph_text("h 4 2\nw=0.25 0 1 2\n1 3\n").instance
        self.assertEqual(hypergraph.hyperedges, ((0, 1, 2), (1, 3)))
        self.assertEqual(hypergraph.weights.tolist(), [0.25, 1.0])

    def test_scale_header(self):
        loaded = read_graph_text("# scale c=4.0\ng 2 1\n0 1\n")
        self.assertEqual(loaded.scale, 4.0)

    def test_round_trip(self):
        graph = Graph(4, [(0, 1), (0, 1), (2, 3)], weights=[1 / 3, 1 / 3, 2.0])
        self.assertEqual(read_graph_text(serialize(graph, scale=0.1)).instance, graph)
        hypergraph = random_rank_hypergraph(10, 30, 5, seed=1, weighted=True)
        self.assertEqual(read_hypergraph_text(serialize(hypergraph)).instance, hypergraph)

    def test_files(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'tri.txt'
            path.write_text("g 3 3\n0 1\n1 2\n0 2\n")
            self.assertEqual(parse_graph(path), complete_graph(3))
            self.assertEqual(parse_hypergraph(path).rank, 2)
            self.assertFalse(load_instance(path).is_hypergraph)
            written = write_label_map(path, ['a', 'b', 'c'])
            self.assertEqual(written, label_map_path(path))
            self.assertTrue(written.name.endswith('tri.txt.labels.json'))
