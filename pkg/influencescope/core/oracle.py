"""
Ground truth for small graphs.

`exact_influence` enumerates every live-edge configuration: under LT each
vertex keeps at most one in-edge (u, v) with probability p_uv, under IC
every edge is live independently with probability w_uv. `mc_influence`
simulates the forward diffusion instead (LT threshold dynamics, IC
cascades), so the two agree only through the live-edge equivalence.
"""
import itertools
import logging
import math
from collections import defaultdict, deque, namedtuple

import numpy as np

from influencescope.core.errors import BudgetExceededError, InvariantViolation

logger = logging.getLogger(__name__)

OracleBudget = namedtuple('OracleBudget', ['max_configs', 'mc_iterations'])

PROB_TOL = 1e-9


def make_budget(max_configs=2**20, mc_iterations=10000):
    if max_configs < 1 or mc_iterations < 1:
        raise ValueError(
            f'oracle budget must be positive, got max_configs={max_configs}, '
            f'mc_iterations={mc_iterations}')
    return OracleBudget(int(max_configs), int(mc_iterations))


def num_configurations(g):
    """
    Number of live-edge configurations the exact oracle would enumerate.
    """
    if g.is_lt:
        count = 1
        for v in range(g.n):
            count *= len(_lt_options(g, v))
        return count
    uncertain = sum(1 for _, _, w in g.edges() if 0 < w < 1)
    return 2**uncertain


def _lt_options(g, v):
    choices, stop = g.lt_choice_distribution(v)
    options = [(u, p) for u, p in choices if p > 0]
    if stop > 0 or not options:
        options.append((None, stop if options else 1.0))
    return options


def live_edge_configurations(g, budget):
    """
    Yield (probability, children) for every live-edge configuration, where
    children[u] lists the heads of the live edges leaving u.
    """
    count = num_configurations(g)
    if count > budget.max_configs:
        raise BudgetExceededError(
            f'{count} live-edge configurations exceed the budget of {budget.max_configs}'
        )
    if g.is_lt:
        options = [_lt_options(g, v) for v in range(g.n)]
        total = 0.0
        for combo in itertools.product(*options):
            prob = 1.0
            children = defaultdict(list)
            for v, (u, p) in enumerate(combo):
                prob *= p
                if u is not None:
                    children[u].append(v)
            total += prob
            yield prob, children
        if abs(total - 1) > PROB_TOL:
            raise InvariantViolation(
                f'LT configuration probabilities sum to {total}')
    else:
        certain = defaultdict(list)
        uncertain = []
        for u, v, w in g.edges():
            if w >= 1:
                certain[u].append(v)
            elif w > 0:
                uncertain.append((u, v, w))
        for mask in itertools.product((False, True), repeat=len(uncertain)):
            prob = 1.0
            children = defaultdict(list, {u: list(vs) for u, vs in certain.items()})
            for live, (u, v, w) in zip(mask, uncertain):
                if live:
                    prob *= w
                    children[u].append(v)
                else:
                    prob *= 1 - w
            yield prob, children


def _reach(children, sources):
    seen = set(sources)
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for y in children.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def exact_influence(g, seeds, budget):
    """
    I(S) as the probability-weighted number of vertices reachable from S over
    all live-edge configurations.
    """
    seeds = set(seeds)
    if not seeds:
        return 0.0
    if len(seeds) == g.n:
        return float(g.n)
    return math.fsum(prob * len(_reach(children, seeds))
                     for prob, children in live_edge_configurations(g, budget))


def rr_membership_prob(g, u, budget):
    """P(u in R) for an RR set R with a uniform root, i.e. I_u / n."""
    return exact_influence(g, {u}, budget) / g.n


def rr_set_distribution(g, budget):
    """
    Exact distribution of an RR set with a uniform root.

    Returns:
        dict frozenset(members) -> probability
    """
    dist = defaultdict(float)
    for prob, children in live_edge_configurations(g, budget):
        parents = defaultdict(list)
        for u, vs in children.items():
            for v in vs:
                parents[v].append(u)
        for root in range(g.n):
            dist[frozenset(_reach(parents, [root]))] += prob / g.n
    return dict(dist)


def exhaustive_optimal_seed(g, k, budget):
    """
    argmax_{|S| = k} I(S) by exact evaluation of every k-subset; ties go to
    the lexicographically smallest subset.

    Returns:
        (tuple of seeds, I(S))
    """
    if not 1 <= k <= g.n:
        raise ValueError(f'k must lie in [1, n={g.n}], but got {k}')
    subsets = list(itertools.combinations(range(g.n), k))
    if len(subsets) * num_configurations(g) > budget.max_configs:
        raise BudgetExceededError(
            f'{len(subsets)} seed sets x {num_configurations(g)} configurations '
            f'exceed the budget of {budget.max_configs}')
    values = [[] for _ in subsets]
    for prob, children in live_edge_configurations(g, budget):
        reach = [_reach(children, [u]) for u in range(g.n)]
        for idx, subset in enumerate(subsets):
            covered = set().union(*(reach[u] for u in subset))
            values[idx].append(prob * len(covered))
    totals = [math.fsum(v) for v in values]
    best = max(range(len(subsets)), key=lambda idx: (totals[idx], -idx))
    return subsets[best], totals[best]


def _simulate_lt(g, seeds, rng):
    thresholds = rng.random(g.n)
    pressure = np.zeros(g.n)
    active = set(seeds)
    frontier = list(active)
    while frontier:
        nxt = []
        for u in frontier:
            for v, w in g.out_edges[u].items():
                if v in active or w <= 0:
                    continue
                pressure[v] += w / g.total_in[v]
                if pressure[v] >= thresholds[v]:
                    active.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(active)


def _simulate_ic(g, seeds, rng):
    active = set(seeds)
    frontier = list(active)
    while frontier:
        nxt = []
        for u in frontier:
            out = g.out_edges[u]
            if not out:
                continue
            coins = rng.random(len(out))
            for (v, w), coin in zip(out.items(), coins):
                if coin < w and v not in active:
                    active.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(active)


def mc_influence(g, seeds, budget, rng):
    """
    Monte-Carlo estimate of I(S) over `budget.mc_iterations` forward
    simulations.

    Returns:
        (mean, standard error)
    """
    seeds = set(seeds)
    if not seeds:
        return 0.0, 0.0
    simulate = _simulate_lt if g.is_lt else _simulate_ic
    spreads = np.fromiter((simulate(g, seeds, rng)
                           for _ in range(budget.mc_iterations)),
                          dtype=np.float64,
                          count=budget.mc_iterations)
    if budget.mc_iterations < 2:
        return float(spreads.mean()), 0.0
    std_err = float(spreads.std(ddof=1) / math.sqrt(budget.mc_iterations))
    return float(spreads.mean()), std_err


def mc_influence_table(g, budget, rng, vertices=None):
    """
    Single-vertex MC influence for `vertices` (all by default), used as
    ground truth for the top-k tracker on graphs too large to enumerate.
    """
    vertices = range(g.n) if vertices is None else vertices
    return {u: mc_influence(g, {u}, budget, rng)[0] for u in vertices}
