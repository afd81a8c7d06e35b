import unittest

import numpy as np

from influencescope.core.errors import SamplingExhaustedError
from influencescope.core.graph import make_event
from influencescope.core.immax import (IMTracker, filter_threshold,
                                       greedy_full, new_greedy, query_im,
                                       select_seeds)
from influencescope.core.oracle import exact_influence, exhaustive_optimal_seed
from influencescope.core.sketch import RRCollection
from influencescope.core.stats import guarded_ceil, im_approximation_ratio

from fixtures import SLOW, budget, random_graph, star


def make_pool(n, sets):
    pool = RRCollection(n)
    for members in sets:
        pool.add_members(members)
    return pool


def random_pool(rng, n=30, num_sets=40):
    sets = []
    for _ in range(num_sets):
        size = int(rng.integers(1, 6))
        members = (rng.zipf(1.6, size=size) - 1) % n
        sets.append(members.tolist())
    return make_pool(n, sets)


class GreedyTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_filter_threshold(self):
        self.assertEqual(filter_threshold(1, 3), -1)
        self.assertEqual(filter_threshold(0, 1), -1)
        self.assertEqual(filter_threshold(10, 1), 9)
        self.assertEqual(filter_threshold(10, 3), 5)
        self.assertEqual(filter_threshold(10, 11), 1.0)
        self.assertEqual(filter_threshold(2, 2), 1)

    def test_greedy_full(self):
        pool = make_pool(5, [[0, 1], [0, 2], [3], [3], [3, 4]])
        result = greedy_full(pool, 1)
        self.assertEqual(result.seeds, [3])
        self.assertEqual(result.coverage, 3)
        result = greedy_full(pool, 2)
        self.assertEqual(result.seeds, [3, 0])
        self.assertEqual(result.coverage, 5)
        self.assertEqual(result.q, 3)
        self.assertEqual(pool.index.degree(3), 3)

    def test_tie_break(self):
        pool = make_pool(3, [[2], [1]])
        self.assertEqual(greedy_full(pool, 1).seeds, [1])
        self.assertEqual(new_greedy(pool, 1, -1).seeds, [1])

    def test_lazy_matches_full(self):
        pool = make_pool(5, [[0, 1], [0, 2], [3], [3], [3, 4]])
        result = new_greedy(pool, 2, -1)
        self.assertEqual(result.seeds, [3, 0])
        self.assertEqual(result.coverage, 5)
        self.assertEqual(result.q, 3)

    def test_exhaustion(self):
        pool = make_pool(2, [[0]])
        self.assertEqual(greedy_full(pool, 3).seeds, [0, 1])
        result = new_greedy(pool, 3, -1)
        self.assertEqual(result.seeds, [0, 1])
        self.assertEqual(result.coverage, 1)
        self.assertEqual(result.q, 2)

    def test_zero_gain_padding(self):
        pool = make_pool(4, [[0], [0], [0]])
        for result in [greedy_full(pool, 2), new_greedy(pool, 2, -1),
                       select_seeds(pool, 2)]:
            self.assertEqual(result.seeds, [0, 1])
            self.assertEqual(result.coverage, 3)
        pool = make_pool(4, [[2], [2]])
        self.assertEqual(greedy_full(pool, 3).seeds, [2, 0, 1])
        self.assertEqual(new_greedy(pool, 2, 0).seeds, [2])

    def test_fallback(self):
        pool = make_pool(3, [[0], [0], [0], [0], [1]])
        filtered = new_greedy(pool, 2, filter_threshold(4, 2))
        self.assertEqual(filtered.seeds, [0])
        self.assertEqual(filtered.q, 2)
        result = select_seeds(pool, 2)
        self.assertEqual(result.seeds, [0, 1])
        self.assertEqual(result.coverage, 5)
        self.assertEqual(result.used_threshold, -1)

    def test_fuzz_bounds(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000 if SLOW else 200):
            pool = random_pool(rng)
            k = int(rng.integers(1, 7))
            full = greedy_full(pool, k)
            max_degree = pool.index.max_degree()
            threshold = filter_threshold(max_degree, k)
            lazy = new_greedy(pool, k, threshold)
            if threshold >= 0:
                self.assertGreaterEqual(
                    lazy.coverage,
                    full.coverage - (k - lazy.q + 1) * threshold - 1e-9)
                self.assertGreaterEqual(lazy.coverage, full.coverage / 2)
            if lazy.q == k + 1:
                self.assertEqual(lazy.coverage, full.coverage)
                self.assertEqual(lazy.seeds, full.seeds)
            self.assertEqual(select_seeds(pool, k).coverage, full.coverage)
            pool.check_consistency()


class IMTrackerTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_practical(self):
        g = star(10)
        tracker = IMTracker(g, 2, 0.3, 0.1, np.random.default_rng(0),
                            mode='practical', assert_invariants=True)
        self.assertIsNone(tracker.r2)
        self.assertIs(tracker.pool, tracker.r1)
        self.assertEqual(tracker.star.value(), tracker.target)
        self.assertEqual(query_im(tracker, 1).seeds, [0])
        result = tracker.query(2)
        self.assertEqual(result.seeds[0], 0)
        self.assertEqual(len(result.seeds), 2)
        with self.assertRaises(ValueError):
            query_im(tracker, 3)
        with self.assertRaises(ValueError):
            query_im(tracker, 0)

    def test_theoretical_split(self):
        g = star(10)
        tracker = IMTracker(g, 2, 0.3, 0.1, np.random.default_rng(1),
                            mode='theoretical', assert_invariants=True)
        self.assertGreater(tracker.m2_ratio, 1)
        self.assertEqual(tracker.r2.M,
                         guarded_ceil(tracker.m2_ratio * tracker.r1.M))
        for t, e in enumerate([
                make_event(0, 1, '-', 0.5, 0),
                make_event(2, 3, '+', 1.0, 1),
                make_event(0, 4, '-', 1.0, 2),
        ]):
            stats = tracker.process(e)
            self.assertEqual(stats['M2'], tracker.r2.M)
        self.assertEqual(tracker.query(1).seeds, [0])

    def test_cap_reached_after_update(self):
        g = star(10, 'LT', 4.0)
        tracker = IMTracker(g, 2, 0.3, 0.1, np.random.default_rng(5))
        tracker.max_sets = tracker.r1.M
        with self.assertRaises(SamplingExhaustedError):
            tracker.process(make_event(0, 1, '-', 4.0, 0))
        self.assertEqual(g.weight(0, 1), 0.0)
        self.assertLess(tracker.star.value(), tracker.target)
        tracker.r1.check_consistency()

    def test_k_max_bound(self):
        with self.assertRaises(ValueError):
            IMTracker(star(4), 3, 0.3, 0.1, np.random.default_rng(0))


class IMGuaranteeTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_approximation_on_tiny_graphs(self):
        rng = np.random.default_rng(77)
        runs = 20 if SLOW else 5
        eps, delta = 0.1, 0.1
        passed = 0
        for run in range(runs):
            g = random_graph(int(rng.integers(5, 8)), 0.25, 'LT', rng)
            tracker = IMTracker(g, 2, eps, delta,
                                np.random.default_rng(run),
                                mode='theoretical')
            seeds = tracker.query(2).seeds
            _, optimum = exhaustive_optimal_seed(g, 2, budget())
            if exact_influence(g, seeds, budget()) >= \
                    im_approximation_ratio(eps) * optimum:
                passed += 1
        self.assertGreaterEqual(passed, runs - max(1, runs // 10))


if __name__ == '__main__':
    unittest.main()
