import itertools
import logging

import networkx as nx
import numpy as np

from influencescope.core.auxiliaries.metric_builder import get_metric
from influencescope.core.graph import to_networkx
from influencescope.core.sketch import RRCollection

logger = logging.getLogger(__name__)


def jaccard(a, b):
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def recall(found, truth):
    truth = set(truth)
    if not truth:
        raise ValueError('recall needs a nonempty ground truth')
    return len(set(found) & truth) / len(truth)


def max_error_rate(found, influence, kth_influence):
    """
    The largest (I^k - I_u) / I^k over the false positives u of `found`,
    i.e. the returned vertices whose influence is below I^k; 0 if none.

    Arguments:
        found: returned vertices
        influence (dict): vertex -> I_u
        kth_influence (float): I^k, the k-th largest influence
    """
    if not kth_influence > 0:
        raise ValueError(f'I^k must be positive, but got {kth_influence}')
    errors = [(kth_influence - influence[u]) / kth_influence for u in found
              if influence[u] < kth_influence]
    return max(errors) if errors else 0.0


def kth_largest(influence, k):
    values = sorted(influence.values(), reverse=True)
    if not 1 <= k <= len(values):
        raise ValueError(f'k must lie in [1, {len(values)}], but got {k}')
    return values[k - 1]


def topk_truth(influence, k):
    """Every vertex with I_u >= I^k (ties at I^k included)."""
    threshold = kth_largest(influence, k)
    return {u for u, value in influence.items() if value >= threshold}


def recall_at_n(ranking, truth_ranking, n):
    """TP_N / N between the first n entries of two rankings."""
    if n < 1:
        raise ValueError(f'n must be positive, but got {n}')
    return len(set(ranking[:n]) & set(truth_ranking[:n])) / n


def evaluate_seeds(g, seeds, pool_size, rng):
    """
    n * D'(S) / M' on a fresh pool of `pool_size` RR sets, independent of
    the pool the seeds were selected on.
    """
    if pool_size < 1:
        raise ValueError(f'pool_size must be positive, but got {pool_size}')
    pool = RRCollection(g.n)
    for _ in range(pool_size):
        pool.append(g, rng)
    return pool.estimate_influence(seeds)


def heuristic_ranking(g, method='degree', n=None):
    """
    Rank vertices by a cheap influence heuristic: weighted out-degree, or
    PageRank on the reversed graph (a vertex scores high when it points to
    high-scoring vertices). Ties go to the smallest id.
    """
    if method == 'degree':
        scores = {u: sum(g.out_edges[u].values()) for u in range(g.n)}
    elif method == 'pagerank':
        scores = nx.pagerank(to_networkx(g).reverse(copy=True),
                             weight='weight')
    else:
        raise ValueError(
            f"method must be one of ['degree', 'pagerank'], but got {method}")
    ranking = sorted(range(g.n), key=lambda u: (-scores[u], u))
    return ranking if n is None else ranking[:n]


def jaccard_matrix(runs):
    """
    Pairwise Jaccard similarity between the vertex sets of several runs.
    """
    runs = [set(run) for run in runs]
    matrix = np.ones((len(runs), len(runs)))
    for i, j in itertools.combinations(range(len(runs)), 2):
        matrix[i, j] = matrix[j, i] = jaccard(runs[i], runs[j])
    return matrix


class MetricCalculator(object):
    """
    Compute a set of named metrics on a top-k answer against a ground truth
    influence table.

    Arguments:
        eval_metric: names from SUPPORT_METRICS or registered metrics
    """
    def __init__(self, eval_metric=('recall', 'max_error_rate', 'jaccard')):
        if isinstance(eval_metric, str):
            eval_metric = {eval_metric}
        self.eval_metric = self.get_metric_funcs(set(eval_metric))

    def get_metric_funcs(self, eval_metric):
        metric_buildin = {
            metric: SUPPORT_METRICS[metric]
            for metric in eval_metric if metric in SUPPORT_METRICS
        }
        metric_register = get_metric(eval_metric - set(SUPPORT_METRICS.keys()))
        return {**metric_buildin, **metric_register}

    def eval(self, found, influence, k):
        truth = topk_truth(influence, k)
        kth = kth_largest(influence, k)
        return {
            metric: func(found=set(found),
                         truth=truth,
                         influence=influence,
                         kth_influence=kth)
            for metric, func in self.eval_metric.items()
        }


def eval_recall(found, truth, **kwargs):
    return recall(found, truth)


def eval_max_error_rate(found, influence, kth_influence, **kwargs):
    return max_error_rate(found, influence, kth_influence)


def eval_jaccard(found, truth, **kwargs):
    return jaccard(found, truth)


def eval_size(found, **kwargs):
    return len(found)


SUPPORT_METRICS = {
    'recall': eval_recall,
    'max_error_rate': eval_max_error_rate,
    'jaccard': eval_jaccard,
    'size': eval_size,
}
