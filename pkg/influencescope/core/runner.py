import logging
import time

import numpy as np

from influencescope.core.auxiliaries.tracker_builder import get_tracker
from influencescope.core.auxiliaries.utils import format_seconds
from influencescope.core.graph import Graph, load_snapshot, read_stream
from influencescope.core.immax import greedy_full, select_seeds
from influencescope.core.monitors.metric_calculator import evaluate_seeds
from influencescope.core.monitors.monitor import Monitor
from influencescope.core.sketch import RRCollection
from influencescope.core.stats import (baseline_cost_target,
                                       im_approximation_ratio)

logger = logging.getLogger(__name__)


def _as_graph(graph):
    return graph if isinstance(graph, Graph) else load_snapshot(graph)


def _as_events(stream):
    if stream is None:
        return []
    if isinstance(stream, str):
        return list(read_stream(stream))
    return list(stream)


def split_rngs(seed):
    """
    Independent generators for the sketches and for the inserted query
    sizes, so that changing tau never changes the sampled RR sets.
    """
    sketch_seq, query_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(sketch_seq), np.random.default_rng(query_seq)


class TrackerRunner(object):
    """
    Drive a tracker over an update stream and record the run report.

    Arguments:
        kind (str): 'topk' or 'im'
        graph: the base Graph or a path to a graph file
        stream: an iterable of UpdateEvent, a path to a stream file or None
        config: the global config
        monitor (Monitor): receives the records, built from the config if None
    """
    def __init__(self, kind, graph, stream, config, monitor=None):
        self.kind = kind
        self.cfg = config
        self.g = _as_graph(graph)
        if self.g.model != config.model:
            logger.warning(
                f'The graph file declares {self.g.model}, overriding cfg.model={config.model}'
            )
        self.events = _as_events(stream)
        self.monitor = monitor if monitor is not None else Monitor.from_cfg(
            config)
        self.rng, self.query_rng = split_rngs(config.seed)
        self.tracker = None

    def _setup(self):
        start = time.perf_counter()
        self.tracker = get_tracker(self.kind, self.g, self.rng, self.cfg)
        seconds = time.perf_counter() - start
        record = {
            'tracker': self.kind,
            'model': self.g.model,
            'n': self.g.n,
            'm': self.g.m,
            'seed': self.cfg.seed,
            'target': self.tracker.target,
            'M1': self.tracker.r1.M,
            'M2': (self.tracker.r2.M if self.kind == 'topk' else
                   self.tracker.pool.M),
            'cost': self.tracker.total_cost,
        }
        if self.kind == 'topk':
            record.update(k=self.tracker.k,
                          eps=self.cfg.sketch.eps,
                          delta=self.cfg.sketch.delta)
        else:
            record.update(mode=self.tracker.mode,
                          k_max=self.tracker.k_max,
                          eps=self.tracker.eps,
                          delta=self.tracker.delta,
                          m2_ratio=self.tracker.m2_ratio)
        self.monitor.add('init', seconds=seconds, **record)
        logger.info(f'Tracker initialized in {format_seconds(seconds)}')

    def _query_topk(self, t):
        start = time.perf_counter()
        found = self.tracker.query()
        seconds = time.perf_counter() - start
        self.monitor.add('query',
                         seconds=seconds,
                         t=t,
                         k=self.tracker.k,
                         threshold=self.tracker.threshold(),
                         vertices=[u for u, _ in found],
                         estimates=[value for _, value in found])
        logger.info(f'Top-{self.tracker.k} query at t={t}: {len(found)} vertices')

    def _query_im(self, t):
        k = int(self.query_rng.integers(1, self.tracker.k_max + 1))
        start = time.perf_counter()
        result = self.tracker.query(k)
        seconds = time.perf_counter() - start
        pool = self.tracker.pool
        self.monitor.add('query',
                         seconds=seconds,
                         t=t,
                         k=k,
                         seeds=result.seeds,
                         coverage=result.coverage,
                         estimate=self.g.n * result.coverage / pool.M,
                         q=result.q,
                         threshold=result.used_threshold,
                         M2=pool.M)
        logger.info(
            f'IM query at t={t} with k={k}: coverage {result.coverage}/{pool.M}, q={result.q}'
        )

    def run(self):
        self._setup()
        tau = self.cfg.im.tau
        for i, e in enumerate(self.events, start=1):
            start = time.perf_counter()
            stats = self.tracker.process(e)
            self.monitor.add('event', seconds=time.perf_counter() - start,
                             **stats)
            if self.kind == 'im' and i % tau == 0:
                self._query_im(e.t)
        if self.kind == 'topk':
            self._query_topk(self.events[-1].t if self.events else -1)
        if self.cfg.report.summary:
            baseline = baseline_cost_target(self.g.n, self.g.m)
            extra = {
                'baseline_cost': baseline,
                'baseline_cost_ratio': baseline / max(self.tracker.total_cost, 1),
            }
            if self.kind == 'im':
                extra['approximation_ratio'] = im_approximation_ratio(
                    self.tracker.eps)
            self.monitor.summarize(**extra)
        return self.monitor


def run_topk(graph, stream, config, out=None):
    """
    Initialize the top-k tracker on `graph`, process `stream` and answer one
    query at the end.

    Returns:
        Monitor holding the run report
    """
    monitor = TrackerRunner('topk', graph, stream, config).run()
    if out:
        monitor.save(out)
    return monitor


def run_im(graph, stream, config, out=None):
    """
    Initialize the IM tracker on `graph` and process `stream`, answering an
    IM query with k drawn uniformly from [1, k_max] every `cfg.im.tau`
    updates.

    Returns:
        Monitor holding the run report
    """
    monitor = TrackerRunner('im', graph, stream, config).run()
    if out:
        monitor.save(out)
    return monitor


def read_seeds(source):
    if isinstance(source, str):
        with open(source, 'r', encoding='utf-8') as f:
            return [int(token) for line in f if not line.startswith('#')
                    for token in line.split()]
    return [int(u) for u in source]


def run_eval(graph, seeds, config):
    """
    Evaluate a seed set on a fresh RR pool of `cfg.oracle.eval_pool_size`
    sets.

    Returns:
        dict with the estimate and the pool size
    """
    g = _as_graph(graph)
    seeds = read_seeds(seeds)
    rng = np.random.default_rng(config.seed)
    estimate = evaluate_seeds(g, seeds, config.oracle.eval_pool_size, rng)
    logger.info(f'I({sorted(seeds)}) ~ {estimate:.4f}')
    return {
        'seeds': sorted(set(seeds)),
        'estimate': estimate,
        'pool_size': config.oracle.eval_pool_size,
    }


def skewed_pool(num_sets, n, rng, mean_size=5.0, zipf_a=1.5):
    """
    A synthetic RR pool whose memberships follow a Zipf law over n
    vertices, so that a few vertices have very large degrees.
    """
    pool = RRCollection(n)
    sizes = 1 + rng.poisson(mean_size - 1, size=num_sets)
    for size in sizes:
        members = (rng.zipf(zipf_a, size=size) - 1) % n
        pool.add_members(members.tolist())
    return pool


def _best_of(repeats, func, *args):
    best, result = float('inf'), None
    for _ in range(repeats):
        start = time.perf_counter()
        result = func(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def run_bench(config, graph=None, stream=None):
    """
    Time New Greedy against full greedy on a skewed synthetic pool and,
    when a graph is given, the update throughput of the top-k tracker.

    Returns:
        dict of timings and coverages
    """
    rng = np.random.default_rng(config.seed)
    bench = config.bench
    pool = skewed_pool(bench.num_sets, bench.num_vertices, rng,
                       bench.mean_size, bench.zipf_a)
    logger.info(
        f'Synthetic pool: {pool.M} sets over {bench.num_vertices} vertices, '
        f'D*={pool.index.max_degree()}')
    full_seconds, full = _best_of(bench.repeats, greedy_full, pool, bench.k)
    new_seconds, new = _best_of(bench.repeats, select_seeds, pool, bench.k)
    results = {
        'k': bench.k,
        'num_sets': pool.M,
        'greedy_full_seconds': full_seconds,
        'new_greedy_seconds': new_seconds,
        'speedup': full_seconds / max(new_seconds, 1e-12),
        'greedy_full_coverage': full.coverage,
        'new_greedy_coverage': new.coverage,
        'q': new.q,
    }
    logger.info(
        f'New Greedy {format_seconds(new_seconds)} vs full greedy '
        f'{format_seconds(full_seconds)} ({results["speedup"]:.1f}x)')

    if graph is not None:
        runner = TrackerRunner('topk', graph, stream, config,
                               Monitor(record_time=True))
        start = time.perf_counter()
        runner.run()
        seconds = time.perf_counter() - start
        num_events = len(runner.events)
        results.update(num_updates=num_events,
                       tracker_seconds=seconds,
                       updates_per_second=num_events / max(seconds, 1e-12))
    return results
