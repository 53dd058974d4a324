import json
import unittest
from maxcut_game.core.graph import (
    Graph,
    GraphFormatError,
    RandomGraphSpec,
    bits,
    contains_triangle,
    count_triangles,
    degree,
    enumerate_graphs,
    generate_er,
    graph_atlas,
    graph_from_dict,
    graph_to_dict,
    induced_subgraph,
    is_connected_mask,
    is_isolated_component,
    load_graph_document,
    mask_of,
    parse_graph,
    parse_graph_text,
    serialize_graph,
)
from maxcut_game.core.fixtures import complete_graph, double_swap_gadget, figure1_graph, path_graph


class TestGraph(unittest.TestCase):
    def setUp(self):
        self.square = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])

    def test_edges_are_normalized(self):
        """Test that edges are stored sorted with the smaller endpoint first."""
        g = Graph(3, [(2, 0), (1, 0)])
        self.assertEqual(g.edges, ((0, 1), (0, 2)))
        self.assertEqual(g.m, 2)
        self.assertTrue(g.has_edge(2, 0))
        self.assertFalse(g.has_edge(1, 2))

    def test_neighbors_and_degree(self):
        """Test neighbourhood queries on a 4-cycle."""
        self.assertEqual(self.square.neighbors(0), [1, 3])
        self.assertEqual(self.square.degree(2), 2)
        self.assertEqual(degree(self.square, 3), 2)

    def test_invalid_graphs(self):
        """Test rejection of self-loops, duplicates and out-of-range vertices."""
        with self.assertRaises(ValueError):
            Graph(3, [(1, 1)])
        with self.assertRaises(ValueError):
            Graph(3, [(0, 1), (1, 0)])
        with self.assertRaises(ValueError):
            Graph(3, [(0, 3)])
        with self.assertRaises(ValueError):
            Graph(-1)
        with self.assertRaises(ValueError):
            Graph(2, [(0, 1)], names=["a", "a"])
        for name in ("", "a b", "a\tb", "a#b"):
            with self.subTest(name=name):
                with self.assertRaises(ValueError):
                    Graph(2, [(0, 1)], names=[name, "c"])

    def test_vertex_out_of_range(self):
        """Test that vertex queries validate their argument."""
        with self.assertRaises(ValueError):
            self.square.degree(4)
        with self.assertRaises(ValueError):
            self.square.neighbors(-1)

    def test_equality_ignores_names(self):
        """Test that graphs compare by vertex count and edge set."""
        named = self.square.with_names(["a", "b", "c", "d"])
        self.assertEqual(named, self.square)
        self.assertEqual(hash(named), hash(self.square))
        self.assertEqual(named.name_of(2), "c")
        self.assertEqual(self.square.name_of(2), "2")

    def test_bit_helpers(self):
        """Test conversion between vertex lists and bitmasks."""
        self.assertEqual(bits(0b10110), [1, 2, 4])
        self.assertEqual(mask_of([4, 1, 2]), 0b10110)
        self.assertEqual(bits(0), [])

    def test_figure1_degrees(self):
        """Test the degrees of the worked example graph."""
        g = figure1_graph()
        self.assertEqual(g.n, 6)
        self.assertEqual(g.m, 9)
        self.assertEqual(g.degree(3), 4)

    def test_to_networkx(self):
        """Test the networkx export keeps isolated vertices."""
        h = Graph(3, [(0, 1)]).to_networkx()
        self.assertEqual(h.number_of_nodes(), 3)
        self.assertEqual(h.number_of_edges(), 1)


class TestGraphAlgorithms(unittest.TestCase):
    def test_triangles(self):
        """Test triangle detection and counting."""
        self.assertTrue(contains_triangle(complete_graph(3)))
        self.assertFalse(contains_triangle(path_graph(5)))
        self.assertEqual(count_triangles(complete_graph(4)), 4)
        self.assertEqual(count_triangles(complete_graph(5)), 10)

    def test_induced_subgraph(self):
        """Test restriction to a vertex subset with index remapping."""
        g = figure1_graph()
        sub, index_map = induced_subgraph(g, [4, 2, 0])
        self.assertEqual(index_map, {0: 0, 2: 1, 4: 2})
        # {v1,v3} and {v3,v5}
        self.assertEqual(sub.edges, ((0, 1), (1, 2)))
        self.assertEqual(sub.names, ("v1", "v3", "v5"))

    def test_connectivity(self):
        """Test connectivity of vertex subsets given as bitmasks."""
        g = path_graph(4)
        self.assertTrue(is_connected_mask(g, 0b0111))
        self.assertFalse(is_connected_mask(g, 0b1011))
        self.assertFalse(is_connected_mask(g, 0))
        self.assertTrue(is_connected_mask(g, 0b1000))

    def test_isolated_component(self):
        """Test detection of a connected part with no outside edges."""
        g, _ = double_swap_gadget()
        self.assertTrue(is_isolated_component(g, [0, 1, 2, 3]))
        self.assertFalse(is_isolated_component(g, [0, 1]))
        self.assertFalse(is_isolated_component(g, [0, 1, 2, 3, 4]))
        with self.assertRaises(ValueError):
            is_isolated_component(g, [])

    def test_enumerate_graphs(self):
        """Test exhaustive labeled graph enumeration."""
        self.assertEqual(sum(1 for _ in enumerate_graphs(4, 2)), 15)
        self.assertEqual(sum(1 for _ in enumerate_graphs(5, 7)), 120)
        self.assertEqual(list(enumerate_graphs(3, 0)), [Graph(3)])
        with self.assertRaises(ValueError):
            list(enumerate_graphs(3, 4))

    def test_graph_atlas(self):
        """Test one graph per isomorphism class from the atlas."""
        counts = {}
        for g in graph_atlas(5):
            counts[g.n] = counts.get(g.n, 0) + 1
        self.assertEqual(counts, {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34})
        self.assertEqual(sum(1 for _ in graph_atlas(4, 4)), 11)
        with self.assertRaises(ValueError):
            list(graph_atlas(8))


class TestRandomGraphs(unittest.TestCase):
    def test_seed_determines_graph(self):
        """Test that a seed reproduces the same sample."""
        spec = RandomGraphSpec(15, 5.0, 42)
        self.assertEqual(generate_er(spec), generate_er(spec))

    def test_edge_probability(self):
        """Test p = avg_degree / (n - 1) and its limits."""
        self.assertAlmostEqual(RandomGraphSpec(11, 5.0, 0).edge_probability, 0.5)
        self.assertEqual(RandomGraphSpec(1, 3.0, 0).edge_probability, 0.0)
        self.assertEqual(generate_er(RandomGraphSpec(6, 5.0, 7)), complete_graph(6))
        self.assertEqual(generate_er(RandomGraphSpec(6, 0.0, 7)).m, 0)
        with self.assertRaises(ValueError):
            RandomGraphSpec(4, 4.0, 0)

    def test_mean_degree(self):
        """Test that sampled graphs have roughly the requested mean degree."""
        total = sum(generate_er(RandomGraphSpec(30, 6.0, seed)).m for seed in range(20))
        mean_degree = 2 * total / (20 * 30)
        self.assertGreater(mean_degree, 5.0)
        self.assertLess(mean_degree, 7.0)


class TestSerialization(unittest.TestCase):
    def test_parse_named_graph(self):
        """Test the line format with names, comments and k."""
        text = "# triangle\nn 3 k 2\nnames a b c\na b\nb c  # second edge\nc a\n"
        g, k = parse_graph_text(text)
        self.assertEqual(k, 2)
        self.assertEqual(g, complete_graph(3))
        self.assertEqual(g.names, ("a", "b", "c"))

    def test_serialize_parse(self):
        """Test that serialization and parsing agree on the worked example."""
        g = figure1_graph()
        text = serialize_graph(g, k=3)
        self.assertTrue(text.startswith("n 6 k 3\nnames v1 v2 v3 v4 v5 v6\n"))
        parsed, k = parse_graph_text(text)
        self.assertEqual(parsed, g)
        self.assertEqual(k, 3)
        self.assertEqual(parsed.names, g.names)
        shuffled = Graph(3, [(0, 1), (1, 2)], names=["2", "0", "x"])
        parsed = parse_graph(serialize_graph(shuffled))
        self.assertEqual(parsed, shuffled)
        self.assertEqual(parsed.names, ("2", "0", "x"))

    def test_parse_errors(self):
        """Test that malformed descriptions raise GraphFormatError."""
        bad = [
            "",
            "m 3\n",
            "n x\n",
            "n 3\n0 0\n",
            "n 3\n0 1\n1 0\n",
            "n 3\n0 5\n",
            "n 2\nnames a b\na z\n",
            "n 3\n0 1 2\n",
        ]
        for text in bad:
            with self.subTest(text=text):
                with self.assertRaises(GraphFormatError):
                    parse_graph(text)

    def test_structured_form(self):
        """Test the dictionary form and its validation."""
        g = figure1_graph()
        record = graph_to_dict(g)
        self.assertEqual(record["names"]["v4"], 3)
        self.assertEqual(graph_from_dict(record), g)
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"n": 2, "edges": [[0, 0]]})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"n": 2, "edges": [[0, 1], [1, 0]]})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"edges": []})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"n": 2, "edges": [[0, 2]]})
        for edges in ([[0, "x"]], [[0, 1.5]], [[0, None]], [5], [[0, 1, 2]], ["01"], [[True, 0]]):
            with self.subTest(edges=edges):
                with self.assertRaises(GraphFormatError):
                    graph_from_dict({"n": 2, "edges": edges})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"n": 2, "edges": [[0, 1]], "names": ["a", "b"]})
        with self.assertRaises(GraphFormatError):
            graph_from_dict({"n": 2, "edges": [[0, 1]], "names": {"a b": 0, "c": 1}})
        with self.assertRaises(GraphFormatError):
            load_graph_document(json.dumps({"n": 2, "edges": [[0, "1"]]}))

    def test_load_graph_document(self):
        """Test reading either format, with the optional k and colouring."""
        document = json.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]], "k": 2, "sigma": [1, 2, 2, 1]})
        g, k, sigma = load_graph_document(document)
        self.assertEqual(g.m, 4)
        self.assertEqual(k, 2)
        self.assertEqual(sigma, [1, 2, 2, 1])
        g, k, sigma = load_graph_document("n 2\n0 1\n")
        self.assertEqual((g.m, k, sigma), (1, None, None))
        with self.assertRaises(GraphFormatError):
            load_graph_document("{not json")


if __name__ == "__main__":
    unittest.main()
