import os

import numpy as np

from influencescope.core.graph import Graph
from influencescope.core.oracle import make_budget

SLOW = os.environ.get('INFLUX_SLOW_TESTS', '0') == '1'


def g3_lt():
    """Vertices 1 and 2 both point to 0; all self-weights 1."""
    g = Graph(3, 'LT')
    g.add_edge(1, 0, 1.0)
    g.add_edge(2, 0, 1.0)
    return g


def g3_ic(w=0.5):
    g = Graph(3, 'IC')
    g.add_edge(1, 0, w)
    g.add_edge(2, 0, w)
    return g


def star(n=5, model='LT', w=1.0):
    """Vertex 0 points to every leaf 1..n-1."""
    g = Graph(n, model)
    for v in range(1, n):
        g.add_edge(0, v, w)
    return g


def chain(n=4):
    """A deterministic LT chain 0 -> 1 -> ... -> n-1 with zero self-weights."""
    g = Graph(n, 'LT')
    for v in range(1, n):
        g.add_edge(v - 1, v, 1.0)
    for v in range(n):
        g.set_self_weight(v, 0.0 if v > 0 else 1.0)
    return g


def random_graph(n, p, model, rng):
    g = Graph(n, model)
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                if model == 'LT':
                    g.add_edge(u, v, float(rng.uniform(0.1, 1.0)))
                else:
                    g.add_edge(u, v, float(rng.uniform(0.1, 0.9)))
    return g


def g3_lines(model='LT'):
    w = '1.0' if model == 'LT' else '0.5'
    return ['# G3\n', f'3 2 {model}\n', f'1 0 {w}\n', f'2 0 {w}\n']


def budget(max_configs=2**20, mc_iterations=10000):
    return make_budget(max_configs, mc_iterations)


def rng(seed=0):
    return np.random.default_rng(seed)
