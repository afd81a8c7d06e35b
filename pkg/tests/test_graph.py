import io
import unittest

import numpy as np

from influencescope.core.errors import GraphFormatError, WeightRangeError
from influencescope.core.graph import (Graph, UpdateEvent, from_networkx,
                                       load_snapshot, make_event,
                                       read_stream, save_snapshot,
                                       to_networkx, write_stream)

from fixtures import g3_ic, g3_lines, g3_lt, random_graph


class GraphTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_load_g3(self):
        g = load_snapshot(g3_lines('LT'))
        self.assertEqual((g.n, g.m, g.model), (3, 2, 'LT'))
        self.assertEqual(g.total_in[0], 3.0)
        choices, stop = g.lt_choice_distribution(0)
        self.assertEqual(dict(choices), {1: 1 / 3, 2: 1 / 3})
        self.assertAlmostEqual(stop, 1 / 3)

    def test_load_empty_edge_list(self):
        g = load_snapshot(['5 0 LT\n'])
        self.assertEqual(g.m, 0)
        self.assertEqual(g.total_in, g.self_weight)
        self.assertEqual(g.lt_choice_distribution(3), ([], 1.0))

    def test_self_weight_lines(self):
        g = load_snapshot(['2 1 LT\n', '0 1 2.0\n', 'v 1 0.5\n'])
        self.assertEqual(g.self_weight, [1.0, 0.5])
        self.assertEqual(g.total_in[1], 2.5)

    def test_load_errors(self):
        bad_inputs = [
            ['3 1 IC\n', '1 0 1.5\n'],
            ['3 2 LT\n', '1 0 1.0\n', '1 0 2.0\n'],
            ['3 1 LT\n', '1 1 1.0\n'],
            ['3 1 XX\n'],
            ['3 2 LT\n', '1 0 1.0\n'],
            ['3 1 LT\n', '1 0\n'],
            ['3 1 LT\n', '1 a 1.0\n'],
            [],
        ]
        for lines in bad_inputs:
            with self.assertRaises(GraphFormatError):
                load_snapshot(lines)
        with self.assertRaises(GraphFormatError) as ctx:
            load_snapshot(['# header next\n', '3 1 IC\n', '1 0 1.5\n'])
        self.assertEqual(ctx.exception.line_no, 3)

    def test_non_finite_weights(self):
        for lines in [['2 1 IC', '0 1 nan'], ['2 1 LT', '0 1 inf'],
                      ['2 1 LT', '0 1 nan'], ['2 0 LT', 'v 1 inf']]:
            with self.assertRaises(GraphFormatError):
                load_snapshot(lines)
        g = Graph(2, 'LT')
        with self.assertRaises(WeightRangeError):
            g.add_edge(0, 1, float('inf'))
        with self.assertRaises(WeightRangeError):
            g.set_self_weight(1, float('nan'))
        self.assertEqual(g.m, 0)
        self.assertEqual(g.total_in, [1.0, 1.0])

        for delta in [float('nan'), float('inf')]:
            with self.assertRaises(ValueError):
                make_event(0, 1, '+', delta)
            with self.assertRaises(WeightRangeError):
                g.apply_update(UpdateEvent(0, 1, '+', delta, 0))
        with self.assertRaises(GraphFormatError):
            list(read_stream(['0 1 + inf 0']))
        self.assertEqual(g.weight(0, 1), 0.0)

    def test_apply_update_lt(self):
        g = g3_lt()
        self.assertEqual(g.apply_update(make_event(1, 0, '+', 0.5)), 0)
        self.assertEqual(g.weight(1, 0), 1.5)
        self.assertEqual(g.total_in[0], 3.5)
        choices, _ = g.lt_choice_distribution(0)
        self.assertAlmostEqual(dict(choices)[1], 3 / 7)

        g = g3_lt()
        g.apply_update(make_event(1, 0, '+', 1.0))
        choices, stop = g.lt_choice_distribution(0)
        self.assertEqual(dict(choices), {1: 0.5, 2: 0.25})
        self.assertEqual(stop, 0.25)

    def test_inverse_pair(self):
        g = g3_lt()
        g.apply_update(make_event(2, 0, '+', 0.3))
        g.apply_update(make_event(2, 0, '-', 0.3))
        self.assertAlmostEqual(g.weight(2, 0), 1.0, delta=1e-12)
        self.assertAlmostEqual(g.total_in[0], 3.0, delta=1e-12)

    def test_insert_and_zero(self):
        g = g3_lt()
        g.apply_update(make_event(0, 1, '+', 2.0))
        self.assertEqual(g.m, 3)
        self.assertEqual(g.weight(0, 1), 2.0)
        g.apply_update(make_event(0, 1, '-', 2.0))
        self.assertEqual(g.m, 3)
        self.assertEqual(g.weight(0, 1), 0.0)
        self.assertEqual(g.lt_choice_distribution(1), ([(0, 0.0)], 1.0))

    def test_rejected_updates(self):
        g = g3_ic()
        with self.assertRaises(WeightRangeError):
            g.apply_update(make_event(1, 0, '+', 0.6))
        self.assertEqual(g.weight(1, 0), 0.5)
        with self.assertRaises(WeightRangeError):
            g.apply_update(make_event(1, 0, '-', 0.6))
        with self.assertRaises(WeightRangeError):
            g.apply_update(make_event(0, 1, '-', 0.1))
        with self.assertRaises(WeightRangeError):
            g.apply_update(make_event(1, 7, '+', 0.1))
        with self.assertRaises(ValueError):
            make_event(1, 1, '+', 0.1)
        with self.assertRaises(ValueError):
            make_event(1, 0, '*', 0.1)
        with self.assertRaises(ValueError):
            make_event(1, 0, '+', 0)

    def test_other_vertices_untouched(self):
        rng = np.random.default_rng(3)
        g = random_graph(8, 0.4, 'LT', rng)
        before = [dict(d) for d in g.in_edges]
        u, v, w = next(iter(g.edges()))
        g.apply_update(make_event(u, v, '-', w / 2))
        for x in range(g.n):
            if x != v:
                self.assertEqual(g.in_edges[x], before[x])

    def test_cache_coherence(self):
        rng = np.random.default_rng(11)
        g = random_graph(20, 0.2, 'LT', rng)
        edges = [(u, v) for u, v, _ in g.edges()]
        for t in range(10000):
            u, v = edges[int(rng.integers(len(edges)))]
            if rng.random() < 0.5 and g.weight(u, v) > 0:
                delta = float(rng.uniform(0, g.weight(u, v)))
                if delta > 0:
                    g.apply_update(make_event(u, v, '-', delta, t))
            else:
                g.apply_update(
                    make_event(u, v, '+', float(rng.uniform(0.01, 1)), t))
        for v in range(g.n):
            fresh = g.recompute_total_in(v)
            self.assertAlmostEqual(g.total_in[v], fresh,
                                   delta=1e-9 * max(fresh, 1.0))

    def test_snapshot_and_stream_files(self):
        g = g3_lt()
        g.set_self_weight(2, 0.25)
        sink = io.StringIO()
        save_snapshot(g, sink)
        other = load_snapshot(io.StringIO(sink.getvalue()))
        self.assertEqual(list(other.edges()), list(g.edges()))
        self.assertEqual(other.self_weight, g.self_weight)

        events = [make_event(1, 0, '+', 0.1, 0), make_event(2, 0, '-', 0.5, 1)]
        sink = io.StringIO()
        write_stream(events, sink)
        self.assertEqual(list(read_stream(io.StringIO(sink.getvalue()))),
                         events)
        with self.assertRaises(GraphFormatError):
            list(read_stream(['1 0 + 0.5\n']))

    def test_networkx_bridge(self):
        g = g3_ic()
        nx_graph = to_networkx(g)
        self.assertEqual(nx_graph.number_of_edges(), 2)
        back = from_networkx(nx_graph, model='IC')
        self.assertEqual(sorted(back.edges()), sorted(g.edges()))

    def test_copy_is_independent(self):
        g = g3_lt()
        other = g.copy()
        other.apply_update(make_event(1, 0, '+', 1.0))
        self.assertEqual(g.weight(1, 0), 1.0)
        self.assertEqual(g.total_in[0], 3.0)
        self.assertIsInstance(other, Graph)


if __name__ == '__main__':
    unittest.main()
