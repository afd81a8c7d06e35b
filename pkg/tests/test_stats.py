import math
import unittest
from unittest import mock

import numpy as np
from scipy.stats import binom

import influencescope.core.stats as stats
from influencescope.core.errors import (InvariantViolation,
                                       SamplingExhaustedError)
from influencescope.core.stats import (baseline_cost_target, check_eps_delta,
                                       guarded_ceil, im_approximation_ratio,
                                       im_targets, log_binomial,
                                       stopping_rule_estimate,
                                       topk_degree_target, topk_error_bound,
                                       upsilon, upsilon1)
from influencescope.core.configs.cfg_tracker import PRACTICAL_IM_EPS

from fixtures import SLOW


class UpsilonTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_anchor(self):
        self.assertAlmostEqual(upsilon(1, 2 / math.e), 4 * (math.e - 2),
                               places=12)
        self.assertAlmostEqual(upsilon1(1, 2 / math.e),
                               1 + 8 * (math.e - 2),
                               places=12)

    def test_wiki_vote_scale(self):
        value = upsilon(0.1, 0.001 / 7115)
        expected = 4 * (math.e - 2) * math.log(2 * 7115 / 0.001) / 0.01
        self.assertAlmostEqual(value, expected, places=9)
        self.assertAlmostEqual(upsilon1(0.1, 0.001 / 7115),
                               1 + 1.1 * expected,
                               places=9)
        self.assertEqual(guarded_ceil(upsilon1(0.1, 0.001 / 7115)), 5207)

    def test_strictly_decreasing(self):
        grid = [0.05, 0.1, 0.2, 0.3]
        for delta in [0.001, 0.01, 0.1]:
            values = [upsilon(eps, delta) for eps in grid]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))
            values = [upsilon1(eps, delta) for eps in grid]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))
        for eps in grid:
            values = [upsilon(eps, d) for d in [0.001, 0.01, 0.1]]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_domain_errors(self):
        for eps, delta in [(0, 0.1), (-1, 0.1), (0.1, 0), (0.1, 1), (0.1, 1.5)]:
            with self.assertRaises(ValueError):
                upsilon(eps, delta)
        with self.assertRaises(ValueError):
            check_eps_delta(0.5, 0.1, tracker=True)
        with self.assertRaises(ValueError):
            check_eps_delta(0.1, 0.3, tracker=True)
        self.assertEqual(check_eps_delta(1 / 3, 0.25, tracker=True).delta, 0.25)

    def test_guarded_ceil(self):
        self.assertEqual(guarded_ceil(7.0), 7)
        self.assertEqual(guarded_ceil(7.0 + 1e-13), 7)
        self.assertEqual(guarded_ceil(6.746), 7)


class TargetTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_topk_degree_target(self):
        self.assertEqual(topk_degree_target(0.1, 0.001, 7115), 5207)
        self.assertEqual(topk_degree_target(1, 2 / math.e, 1), 7)
        self.assertLessEqual(topk_degree_target(0.2, 0.001, 7115),
                             topk_degree_target(0.1, 0.001, 7115))
        with self.assertRaises(ValueError):
            topk_degree_target(0.1, 0.001, 0)

    def test_practical_im_target(self):
        n = 7115
        inner = guarded_ceil(
            upsilon1(PRACTICAL_IM_EPS / (2 - 1 / math.e), 2 / (3 * n**2)))
        targets = im_targets(PRACTICAL_IM_EPS, 0.001, n, 100, 'practical')
        self.assertEqual(targets.d1_target, math.ceil(inner / 2))
        self.assertAlmostEqual(targets.d1_target, 11547, delta=1)
        self.assertEqual(targets.m2_ratio, 1.0)

    def test_theoretical_im_target(self):
        n, delta = 1000, 0.001
        targets = im_targets(0.1, delta, n, 1, 'theoretical')
        self.assertEqual(targets.d1_target,
                         guarded_ceil(upsilon1(0.1, 2 * delta / (3 * n))))
        self.assertAlmostEqual(
            targets.m2_ratio,
            math.log(3 * n / (2 * delta)) / math.log(2 * n / delta),
            places=9)

    def test_theoretical_ratio_growth(self):
        n, k = 10**6, 50
        small = im_targets(0.1, 0.001, n, k, 'theoretical').m2_ratio
        large = im_targets(0.1, 0.001, n, 2 * k, 'theoretical').m2_ratio
        self.assertGreater(large / small, 1)
        self.assertLessEqual(large / small, 2)

    def test_im_target_errors(self):
        with self.assertRaises(ValueError):
            im_targets(0.1, 0.001, 10, 6, 'theoretical')
        with self.assertRaises(ValueError):
            im_targets(0.1, 0.001, 10, 2, 'greedy')

    def test_log_binomial(self):
        self.assertAlmostEqual(log_binomial(10, 3), math.log(120), places=12)
        self.assertEqual(log_binomial(5, 0), 0.0)
        self.assertAlmostEqual(log_binomial(10**7, 500),
                               math.lgamma(10**7 + 1) - math.lgamma(501) -
                               math.lgamma(10**7 - 499),
                               delta=1e-6)
        with self.assertRaises(ValueError):
            log_binomial(3, 4)

    def test_topk_error_bound(self):
        for n in [7115, 99000]:
            bound = topk_error_bound(0.1, 0.001, n)
            self.assertGreaterEqual(bound, 0.360)
            self.assertLessEqual(bound, 0.366)
            self.assertLessEqual(bound, 61 / 15 * 0.1)
        self.assertLess(topk_error_bound(1e-4, 0.001, 7115), 1e-3)
        with self.assertRaises(ValueError):
            topk_error_bound(0.5, 0.001, 7115)
        with mock.patch.object(stats, 'CEIL_GUARD', -1.0):
            with self.assertRaises(InvariantViolation):
                topk_error_bound(0.1, 0.001, 7115)

    def test_im_approximation_ratio(self):
        self.assertAlmostEqual(im_approximation_ratio(PRACTICAL_IM_EPS), 0.5,
                               delta=1e-9)

    def test_baseline_cost_target(self):
        self.assertEqual(baseline_cost_target(1, 0), 0.0)
        self.assertAlmostEqual(baseline_cost_target(8, 8), 32 * 16 * 3)


class StoppingRuleTest(unittest.TestCase):
    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def test_constant_sampler(self):
        estimate, draws = stopping_rule_estimate(lambda: 1, 1, 2 / math.e)
        self.assertEqual(draws, 7)
        self.assertEqual(estimate, 1.0)

    def test_iterable_sampler(self):
        estimate, draws = stopping_rule_estimate([0, 1] * 10, 1, 2 / math.e)
        self.assertEqual(draws, 14)
        self.assertEqual(estimate, 0.5)

    def test_exhausted(self):
        with self.assertRaises(SamplingExhaustedError) as ctx:
            stopping_rule_estimate([1, 0, 1], 1, 2 / math.e)
        self.assertEqual(ctx.exception.num_samples, 3)
        self.assertEqual(ctx.exception.num_positive, 2)
        with self.assertRaises(SamplingExhaustedError):
            stopping_rule_estimate(lambda: 0, 1, 2 / math.e, max_draws=100)

    def test_fair_coin(self):
        rng = np.random.default_rng(2022)
        repeats = 1000 if SLOW else 200
        target = guarded_ceil(upsilon1(0.1, 0.05))
        estimates, draws = [], []
        for _ in range(repeats):
            coins = (rng.random(6 * target) < 0.5).tolist()
            estimate, num = stopping_rule_estimate(coins, 0.1, 0.05)
            estimates.append(estimate)
            draws.append(num)
        estimates = np.array(estimates)
        inside = np.mean((estimates >= 0.45) & (estimates <= 0.55))
        self.assertGreaterEqual(inside, 0.95)
        self.assertLess(abs(np.mean(draws) - target / 0.5), 0.1 * target / 0.5)


def bernoulli_stream(mu, rng, chunk=1 << 16):
    while True:
        yield from (rng.random(chunk) < mu).tolist()


class StoppingRuleGuaranteeTest(unittest.TestCase):
    """
    Repeated runs of the stopping rule on one shared Bernoulli stream; each
    run consumes a disjoint stretch of it, so the runs are independent.
    """
    trials = 10000 if SLOW else 2000
    eps, delta = (0.25, 0.1) if SLOW else (0.5, 0.1)

    def setUp(self):
        print(('Testing %s.%s' % (type(self).__name__, self._testMethodName)))

    def _estimates(self, mu, seed):
        stream = bernoulli_stream(mu, np.random.default_rng(seed))
        return np.array([
            stopping_rule_estimate(stream, self.eps, self.delta)[0]
            for _ in range(self.trials)
        ])

    def test_relative_error(self):
        allowed = binom.ppf(0.99, self.trials, self.delta)
        for seed, mu in enumerate([0.1, 0.5, 0.9]):
            estimates = self._estimates(mu, seed)
            misses = np.sum(np.abs(estimates - mu) > self.eps * mu)
            self.assertLessEqual(misses, allowed, msg=f'mu={mu}')

    def test_tails(self):
        target = guarded_ceil(upsilon1(self.eps, self.delta))
        shrink = target / (target + 1)
        allowed = binom.ppf(0.99, self.trials, self.delta / 2)
        for seed, mu in enumerate([0.1, 0.5, 0.9], start=10):
            estimates = self._estimates(mu, seed)
            above = np.sum(estimates > (1 + self.eps) * mu)
            below = np.sum(estimates < shrink * (1 - self.eps) * mu)
            self.assertLessEqual(above, allowed, msg=f'mu={mu}')
            self.assertLessEqual(below, allowed, msg=f'mu={mu}')


if __name__ == '__main__':
    unittest.main()
