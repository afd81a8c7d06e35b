import logging

from influencescope.core.errors import InvariantViolation, SamplingExhaustedError
from influencescope.core.sketch import RRCollection
from influencescope.core.stats import check_eps_delta, topk_degree_target

logger = logging.getLogger(__name__)


class TopKTracker(object):
    """
    Track the top-k influential individuals of a dynamic graph.

    Two pools of equal size are kept: R1 sizes the sample through the
    invariant D_1^k = ceil(upsilon1(eps, delta / n)) on its k-th largest
    degree, R2 answers queries. Every vertex u with
    D_2(u) >= (1 - eps) / (1 + eps) * D_1^k is returned by `query`.

    Arguments:
        g (Graph): the graph, mutated in place by `process`
        k (int): rank of the tracked individuals
        eps (float): relative error, at most 1/3
        delta (float): failure probability, at most 1/4
        rng (numpy.random.Generator): source of all randomness
        max_sets (int): hard cap on |R1|
        assert_invariants (bool): recheck pools after each update
    """
    def __init__(self,
                 g,
                 k,
                 eps,
                 delta,
                 rng,
                 max_sets=50000000,
                 assert_invariants=False):
        self.cfg = check_eps_delta(eps, delta, tracker=True)
        if not 1 <= k <= g.n:
            raise ValueError(f'k must lie in [1, n={g.n}], but got {k}')
        self.g = g
        self.k = k
        self.rng = rng
        self.max_sets = max_sets
        self.assert_invariants = assert_invariants
        self.target = topk_degree_target(eps, delta, g.n)

        self.r1 = RRCollection(g.n, ranks=[k])
        self.r2 = RRCollection(g.n)
        self.kth = self.r1.index.tracker(k)

        added, _ = self.rebalance()
        logger.info(
            f'Top-{k} tracker ready: target D_1^k={self.target}, M1=M2={added}, '
            f'C(R)={self.total_cost}')
        self._check()

    @property
    def total_cost(self):
        return self.r1.total_cost + self.r2.total_cost

    def rebalance(self):
        """
        Grow or shrink both pools pairwise until D_1^k equals the target.
        Each step moves D_1^k by at most one.

        Returns:
            (number of sets added to each pool, number removed from each pool)
        """
        added, removed = 0, 0
        while self.kth.value() < self.target:
            if self.r1.M >= self.max_sets:
                raise SamplingExhaustedError(
                    f'R1 reached the cap of {self.max_sets} sets with '
                    f'D_1^k={self.kth.value()} < {self.target}',
                    num_samples=self.r1.M,
                    num_positive=self.kth.value())
            self.r1.append(self.g, self.rng)
            self.r2.append(self.g, self.rng)
            added += 1
        while self.kth.value() > self.target:
            # newest first, so the surviving sets form a stable prefix
            self.r1.remove_last()
            self.r2.remove_last()
            removed += 1
        return added, removed

    def process(self, e):
        """
        Apply one edge weight update and restore the invariants.

        An update rejected by `check_update` leaves the tracker untouched.
        SamplingExhaustedError is raised only after the update has been
        applied: the graph carries the new weight, both pools are refreshed
        and consistent, but D_1^k stays below its target and the tracker
        must not be queried any more.

        Returns:
            dict of maintenance statistics
        """
        # rejects the event before anything is mutated
        self.g.check_update(e)
        v = self.g.apply_update(e)
        refreshed1 = self.r1.refresh_affected(self.g, v, self.rng)
        refreshed2 = self.r2.refresh_affected(self.g, v, self.rng)
        added, removed = self.rebalance()
        self._check()
        stats = {
            't': e.t,
            'refreshed': refreshed1 + refreshed2,
            'added': added,
            'removed': removed,
            'M1': self.r1.M,
            'M2': self.r2.M,
            'cost': self.total_cost,
        }
        logger.debug(f'update {tuple(e)}: {stats}')
        return stats

    def threshold(self):
        eps = self.cfg.eps
        return (1 - eps) / (1 + eps) * self.kth.value()

    def query(self):
        """
        Returns:
            list of (vertex, n * D_2(u) / M_2) with D_2(u) >= threshold, by
            decreasing degree then increasing vertex id
        """
        threshold = self.threshold()
        found = sorted(self.r2.index.iterate_at_least(threshold),
                       key=lambda item: (-item[1], item[0]))
        scale = self.g.n / self.r2.M
        return [(u, degree * scale) for u, degree in found]

    def _check(self):
        if not self.assert_invariants:
            return
        if self.kth.value() != self.target:
            raise InvariantViolation(
                f'D_1^k is {self.kth.value()}, target {self.target}')
        if self.r1.M != self.r2.M:
            raise InvariantViolation(
                f'pool sizes differ: M1={self.r1.M}, M2={self.r2.M}')
        self.r1.check_consistency()
        self.r2.check_consistency()
