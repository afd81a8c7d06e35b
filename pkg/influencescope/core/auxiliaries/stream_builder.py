"""
Synthesis of an update stream from a full graph snapshot.

The edges of the full graph are partitioned at random into E1 (kept in the
base graph), E2 (kept in the base graph and churned by one decrease and one
increase of the same amount) and E3 (absent from the base graph and
inserted by one increase). LT edges all get weight 1 and churn amounts on
a dyadic grid; IC edges get 1 / in-degree(v) of the full graph, and churn
amounts are scaled by that weight. Replaying the stream on the base graph
gives back the weights of the full graph, bit for bit under LT.
"""
import logging
from collections import Counter

import networkx as nx
import numpy as np

from influencescope.core.errors import WeightRangeError
from influencescope.core.graph import (Graph, WEIGHT_TOL, load_snapshot,
                                       make_event, save_snapshot,
                                       write_stream)

logger = logging.getLogger(__name__)

FRACTION_TOL = 1e-9
# LT churn amounts are multiples of 1 / CHURN_STEPS
CHURN_STEPS = 2**20


def check_fractions(fractions):
    if len(fractions) != 3:
        raise ValueError(f'fractions needs exactly 3 values, but got {fractions}')
    e1, e2, e3 = (float(x) for x in fractions)
    if e1 <= 0 or e2 < 0 or e3 < 0:
        raise ValueError(
            f'the base fraction must be positive and the others non-negative, but got {fractions}'
        )
    if abs(e1 + e2 + e3 - 1) > FRACTION_TOL:
        raise ValueError(f'fractions {fractions} do not sum to 1')
    return e1, e2, e3


def full_weights(g):
    """
    The weight of every edge of `g` under the stream protocol.
    """
    if g.is_lt:
        return {(u, v): 1.0 for u, v, _ in g.edges()}
    in_degree = Counter(v for _, v, _ in g.edges())
    return {(u, v): 1.0 / in_degree[v] for u, v, _ in g.edges()}


class StreamSplitter(object):
    """
    Partition the edges of a full graph into base edges and update events.

    Arguments:
        fractions (tuple): (e1, e2, e3), the share of kept, churned and
            inserted edges
    """
    def __init__(self, fractions=(0.85, 0.05, 0.10)):
        self.fractions = check_fractions(fractions)

    def partition(self, num_edges, rng):
        _, e2, e3 = self.fractions
        num_churn = int(round(e2 * num_edges))
        num_insert = int(round(e3 * num_edges))
        if num_churn + num_insert > num_edges:
            num_insert = num_edges - num_churn
        order = rng.permutation(num_edges)
        churn = order[:num_churn]
        insert = order[num_churn:num_churn + num_insert]
        keep = order[num_churn + num_insert:]
        return keep, churn, insert

    def __call__(self, full, rng):
        """
        Returns:
            (base Graph, list of UpdateEvent ordered by timestamp)
        """
        edges = sorted((u, v) for u, v, _ in full.edges())
        weights = full_weights(full)
        keep, churn, insert = self.partition(len(edges), rng)

        base = Graph(full.n, full.model)
        if full.is_lt:
            for v in range(full.n):
                base.set_self_weight(v, full.self_weight[v])
        for idx in sorted(np.concatenate([keep, churn]).tolist()):
            u, v = edges[idx]
            base.add_edge(u, v, weights[(u, v)])

        pending = []
        for idx in sorted(churn.tolist()):
            u, v = edges[idx]
            if full.is_lt:
                amount = int(rng.integers(1, CHURN_STEPS + 1)) / CHURN_STEPS
            else:
                amount = float(rng.random()) * weights[(u, v)]
            if amount <= 0:
                continue
            pending.append((u, v, '-', amount))
            pending.append((u, v, '+', amount))
        for idx in sorted(insert.tolist()):
            u, v = edges[idx]
            pending.append((u, v, '+', weights[(u, v)]))

        order = rng.permutation(len(pending)).tolist()
        shuffled = [pending[i] for i in order]
        if not full.is_lt:
            shuffled = _decrease_first(shuffled)
        events = [
            make_event(u, v, sign, amount, t)
            for t, (u, v, sign, amount) in enumerate(shuffled)
        ]
        logger.info(
            f'Split {len(edges)} edges into {len(keep)} kept, {len(churn)} churned '
            f'and {len(insert)} inserted; the stream holds {len(events)} updates')
        return base, events

    def __repr__(self):
        return f'{self.__class__.__name__}(fractions={self.fractions})'


def _decrease_first(updates):
    """
    Swap the two churn updates of an edge whenever the increase comes first,
    so that IC weights never climb above their full-graph value.
    """
    updates = list(updates)
    first_increase = {}
    for pos, (u, v, sign, _) in enumerate(updates):
        if sign == '+' and (u, v) not in first_increase:
            first_increase[(u, v)] = pos
        elif sign == '-' and (u, v) in first_increase:
            other = first_increase.pop((u, v))
            updates[other], updates[pos] = updates[pos], updates[other]
    return updates


def replay(base, events):
    """
    Apply `events` to a copy of `base`, raising WeightRangeError on the
    first update leaving the valid weight range.
    """
    g = base.copy()
    for e in events:
        g.apply_update(e)
    return g


def check_replay(full, base, events):
    """
    Replay the stream and compare every weight against the protocol weights
    of the full graph: exactly under LT, up to WEIGHT_TOL under IC.
    """
    final = replay(base, events)
    expected = full_weights(full)
    if final.m != len(expected):
        raise WeightRangeError(
            f'replayed graph has {final.m} edges instead of {len(expected)}')
    tol = 0.0 if final.is_lt else WEIGHT_TOL
    for u, v, w in final.edges():
        want = expected.get((u, v))
        if want is None or not abs(w - want) <= tol:
            raise WeightRangeError(
                f'replayed weight of ({u}, {v}) is {w}, expected {want}'
            )
    return final


def generate_stream(full_graph, fractions, rng, base_out=None, stream_out=None):
    """
    Build the base graph and the update stream of `full_graph` (a Graph or
    a path to a graph file), check that the stream replays to the full
    weights and write both files when paths are given.

    Returns:
        (base Graph, list of UpdateEvent)
    """
    full = full_graph if isinstance(full_graph, Graph) else load_snapshot(
        full_graph)
    base, events = StreamSplitter(fractions)(full, rng)
    check_replay(full, base, events)
    if base_out:
        save_snapshot(base, base_out)
    if stream_out:
        write_stream(events, stream_out)
    return base, events


def powerlaw_graph(n, model='LT', seed=0, alpha=0.41, beta=0.54, gamma=0.05):
    """
    A synthetic directed scale-free graph without parallel edges or self
    loops, weighted with the stream protocol weights.
    """
    multi = nx.scale_free_graph(n, alpha=alpha, beta=beta, gamma=gamma,
                                seed=seed)
    simple = nx.DiGraph()
    simple.add_nodes_from(range(n))
    simple.add_edges_from((u, v) for u, v in multi.edges() if u != v)
    edges = sorted(simple.edges())
    in_degree = Counter(v for _, v in edges)
    g = Graph(n, model)
    for u, v in edges:
        g.add_edge(u, v, 1.0 if model == 'LT' else 1.0 / in_degree[v])
    return g
