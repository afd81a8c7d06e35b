"""
Influence maximization over a maintained RR set pool.

The tracker keeps the largest degree D* of its sizing pool on target; IM
queries run a lazy greedy maximum coverage over the query pool. `new_greedy`
copies only the vertices whose degree exceeds a threshold T_D and reports
q, the first step whose realized marginal coverage is <= T_D (k + 1 if
none). When q <= k the query falls back to T_D = -1, i.e. no filtering.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from influencescope.core.errors import InvariantViolation, SamplingExhaustedError
from influencescope.core.sketch import RRCollection
from influencescope.core.stats import CEIL_GUARD, im_targets

logger = logging.getLogger(__name__)

GreedyResult = namedtuple('GreedyResult',
                          ['seeds', 'coverage', 'q', 'used_threshold'])


def _pad_zero_gain(seeds, n, k):
    # every vertex left out has zero marginal coverage here
    chosen = set(seeds)
    for u in range(n):
        if len(seeds) >= k:
            break
        if u not in chosen:
            seeds.append(u)
    return seeds


def greedy_full(c, k):
    """
    Plain greedy maximum coverage on a full copy of the degree index.

    The selected vertex is the one with the largest marginal coverage, the
    smallest id among ties. The source index is never modified. Once no
    vertex adds coverage, the seed set is filled up to min(k, n) with the
    smallest unselected ids.
    """
    if k < 1:
        raise ValueError(f'k must be positive, but got {k}')
    copy = c.index.snapshot_above(-1)
    covered = np.zeros(c.M, dtype=bool)
    seeds, coverage = [], 0
    for _ in range(k):
        u = copy.top_vertex()
        if u is None:
            break
        seeds.append(u)
        for slot in c.inv.get(u, ()):
            if covered[slot]:
                continue
            covered[slot] = True
            coverage += 1
            for v in c.sets[slot].members:
                copy.decrease(v)
        copy.remove(u)
    return GreedyResult(_pad_zero_gain(seeds, c.n, k), coverage, k + 1, -1)


def new_greedy(c, k, threshold):
    """
    Lazy greedy maximum coverage on the vertices with degree > threshold.

    Degrees in the copy are upper bounds of the marginal coverage; a vertex
    is selected only when its bound was refreshed during the current step.

    Arguments:
        c (RRCollection): the query pool
        k (int): seed set size
        threshold (float): T_D; -1 disables the filtering

    Returns:
        GreedyResult; when the copy runs out of vertices before k seeds,
        q is set to that step, and an unfiltered run (threshold < 0) fills
        the seed set up to min(k, n) with the smallest unselected ids
    """
    if k < 1:
        raise ValueError(f'k must be positive, but got {k}')
    copy = c.index.snapshot_above(threshold)
    stamp = dict.fromkeys(copy.locator, 1)
    covered = np.zeros(c.M, dtype=bool)
    seeds, coverage, q = [], 0, k + 1

    for i in range(1, k + 1):
        exhausted = False
        while True:
            u = copy.top_vertex()
            if u is None:
                exhausted = True
                break
            slots = c.inv.get(u, ())
            if stamp[u] == i:
                margin = 0
                for slot in slots:
                    if not covered[slot]:
                        covered[slot] = True
                        margin += 1
                seeds.append(u)
                coverage += margin
                copy.remove(u)
                if margin <= threshold and q > k:
                    q = i
                break
            margin = sum(1 for slot in slots if not covered[slot])
            if margin == 0:
                copy.remove(u)
            else:
                copy.decrease_by(u, copy.degree(u) - margin)
            stamp[u] = i
        if exhausted:
            if q > k:
                q = i
            if threshold < 0:
                _pad_zero_gain(seeds, c.n, k)
            break

    return GreedyResult(seeds, coverage, q, threshold)


def filter_threshold(max_degree, k):
    """
    T_D = min(D* / (k - 1), D* - 1); filtering is skipped (T_D = -1) when
    D* < 2. For k = 1 only the second arm applies.
    """
    if max_degree < 2:
        return -1
    if k == 1:
        return max_degree - 1
    return min(max_degree / (k - 1), max_degree - 1)


def select_seeds(c, k):
    """
    Run New Greedy with the filter threshold and fall back to the unfiltered
    run when the returned q shows the filtered answer may be worse.
    """
    threshold = filter_threshold(c.index.max_degree(), k)
    result = new_greedy(c, k, threshold)
    if threshold >= 0 and result.q <= k:
        logger.warning(
            f'New Greedy with T_D={threshold:.3f} stopped at q={result.q} <= k={k}, '
            'rerunning without filtering')
        result = new_greedy(c, k, -1)
    return result


class IMTracker(object):
    """
    Maintain RR sets for influence maximization queries on a dynamic graph.

    practical mode keeps one pool with D* = ceil(ceil(upsilon1(eps / (2 - 1/e),
    2 / (3 n^2))) / 2) and carries no formal guarantee; theoretical mode
    sizes R1 with D_1* = ceil(upsilon1(eps, 2 delta / (3n))) and keeps
    |R2| = ceil(m2_ratio * |R1|), queries running on R2.

    Arguments:
        g (Graph): the graph, mutated in place by `process`
        k_max (int): largest seed set size a query may ask for, <= n / 2
        eps (float): relative error of the sizing
        delta (float): failure probability
        rng (numpy.random.Generator): source of all randomness
        mode (str): 'practical' or 'theoretical'
        max_sets (int): hard cap on |R1|
        assert_invariants (bool): recheck pools after each update
    """
    def __init__(self,
                 g,
                 k_max,
                 eps,
                 delta,
                 rng,
                 mode='practical',
                 max_sets=50000000,
                 assert_invariants=False):
        targets = im_targets(eps, delta, g.n, k_max, mode)
        self.g = g
        self.k_max = k_max
        self.eps = eps
        self.delta = delta
        self.rng = rng
        self.mode = mode
        self.max_sets = max_sets
        self.assert_invariants = assert_invariants
        self.target = targets.d1_target
        self.m2_ratio = targets.m2_ratio

        self.r1 = RRCollection(g.n, ranks=[1])
        self.r2 = RRCollection(g.n) if mode == 'theoretical' else None
        self.star = self.r1.index.tracker(1)
        if mode == 'practical':
            logger.warning(
                'Practical IM sizing ignores the factor k_max and carries no formal guarantee'
            )

        self.rebalance()
        logger.info(
            f'IM tracker ({mode}) ready: target D*={self.target}, '
            f'M1={self.r1.M}, M2={self.pool.M}, C(R)={self.total_cost}')
        self._check()

    @property
    def pool(self):
        """The pool IM queries run on."""
        return self.r2 if self.r2 is not None else self.r1

    @property
    def total_cost(self):
        cost = self.r1.total_cost
        if self.r2 is not None:
            cost += self.r2.total_cost
        return cost

    def _r2_size(self):
        value = self.m2_ratio * self.r1.M
        return int(math.ceil(value - CEIL_GUARD * value))

    def _sync_r2(self):
        if self.r2 is None:
            return 0, 0
        size = self._r2_size()
        added = 0
        while self.r2.M < size:
            self.r2.append(self.g, self.rng)
            added += 1
        removed = self.r2.M - size
        self.r2.truncate(size)
        return added, max(removed, 0)

    def rebalance(self):
        added, removed = 0, 0
        while self.star.value() < self.target:
            if self.r1.M >= self.max_sets:
                raise SamplingExhaustedError(
                    f'R1 reached the cap of {self.max_sets} sets with '
                    f'D*={self.star.value()} < {self.target}',
                    num_samples=self.r1.M,
                    num_positive=self.star.value())
            self.r1.append(self.g, self.rng)
            added += 1
        while self.star.value() > self.target:
            self.r1.remove_last()
            removed += 1
        added2, removed2 = self._sync_r2()
        return added + added2, removed + removed2

    def process(self, e):
        """
        Apply one edge weight update and restore the sizing invariants.

        As for the top-k tracker, SamplingExhaustedError from `rebalance`
        comes after the update and the refresh: the pools stay consistent
        with the updated graph but D* is below target, so the tracker must
        be dropped.

        Returns:
            dict of maintenance statistics
        """
        self.g.check_update(e)
        v = self.g.apply_update(e)
        refreshed = self.r1.refresh_affected(self.g, v, self.rng)
        if self.r2 is not None:
            refreshed += self.r2.refresh_affected(self.g, v, self.rng)
        added, removed = self.rebalance()
        self._check()
        stats = {
            't': e.t,
            'refreshed': refreshed,
            'added': added,
            'removed': removed,
            'M1': self.r1.M,
            'M2': self.pool.M,
            'cost': self.total_cost,
        }
        logger.debug(f'update {tuple(e)}: {stats}')
        return stats

    def query(self, k):
        return query_im(self, k)

    def _check(self):
        if not self.assert_invariants:
            return
        if self.star.value() != self.target:
            raise InvariantViolation(
                f'D* is {self.star.value()}, target {self.target}')
        if self.r2 is not None and self.r2.M != self._r2_size():
            raise InvariantViolation(
                f'|R2|={self.r2.M}, expected {self._r2_size()}')
        self.r1.check_consistency()
        if self.r2 is not None:
            self.r2.check_consistency()


def query_im(tr, k):
    """
    Answer an IM query of size k on the tracker's query pool (R2 in
    theoretical mode, the single pool otherwise).
    """
    if not 1 <= k <= tr.k_max:
        raise ValueError(f'k must lie in [1, k_max={tr.k_max}], but got {k}')
    return select_seeds(tr.pool, k)
