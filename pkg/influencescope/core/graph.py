import logging
import math
from collections import namedtuple

import networkx as nx

from influencescope.core.errors import GraphFormatError, WeightRangeError

logger = logging.getLogger(__name__)

MODELS = ('LT', 'IC')
DEFAULT_SELF_WEIGHT = 1.0
# absorbs float drift of weights that are added and subtracted back
WEIGHT_TOL = 1e-12

UpdateEvent = namedtuple('UpdateEvent', ['u', 'v', 'sign', 'delta', 't'])


def make_event(u, v, sign, delta, t=0):
    """
    Build a validated edge weight update (u, v, sign, delta, t).
    """
    if sign not in ('+', '-'):
        raise ValueError(f"sign must be '+' or '-', but got {sign!r}")
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError(f'delta must be positive and finite, but got {delta}')
    if u == v:
        raise ValueError(f'self loops are not supported, got ({u}, {v})')
    return UpdateEvent(int(u), int(v), sign, float(delta), int(t))


class Graph(object):
    """
    A weighted directed network over the fixed vertex set {0, ..., n-1}.

    Under LT each vertex also carries a self-weight w_v and the cached total
    weight W_v = w_v + sum_u w_uv, so that p_uv = w_uv / W_v. Under IC the
    edge weight is the propagation probability itself.

    Arguments:
        n (int): number of vertices
        model (str): 'LT' or 'IC'
        self_weight (float): initial self-weight of every vertex (LT only)
    """
    def __init__(self, n, model='LT', self_weight=DEFAULT_SELF_WEIGHT):
        if n < 0:
            raise ValueError(f'n must be non-negative, but got {n}')
        if model not in MODELS:
            raise ValueError(
                f'model must be chosen from {MODELS}, but got {model}')
        self.n = n
        self.model = model
        self.m = 0
        self.in_edges = [dict() for _ in range(n)]
        self.out_edges = [dict() for _ in range(n)]
        if model == 'LT':
            self.self_weight = [float(self_weight)] * n
            self.total_in = [float(self_weight)] * n
        else:
            self.self_weight = None
            self.total_in = None

    @property
    def is_lt(self):
        return self.model == 'LT'

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise WeightRangeError(
                f'vertex {v} is out of range [0, {self.n})')

    def _check_weight(self, w):
        if not math.isfinite(w):
            raise WeightRangeError(f'weight {w} is not finite')
        if w < 0:
            raise WeightRangeError(f'weight {w} is negative')
        if not self.is_lt and w > 1:
            raise WeightRangeError(
                f'IC weight {w} is not a probability in [0, 1]')

    def add_edge(self, u, v, w):
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise WeightRangeError(f'self loop ({u}, {v}) is not supported')
        if u in self.in_edges[v]:
            raise WeightRangeError(f'duplicate edge ({u}, {v})')
        w = float(w)
        self._check_weight(w)
        self.in_edges[v][u] = w
        self.out_edges[u][v] = w
        self.m += 1
        if self.is_lt:
            self.total_in[v] += w

    def set_self_weight(self, v, w):
        if not self.is_lt:
            raise ValueError('self-weights only exist under the LT model')
        self._check_vertex(v)
        w = float(w)
        if not math.isfinite(w) or w < 0:
            raise WeightRangeError(f'self-weight {w} of vertex {v} is not a non-negative finite number')
        self.total_in[v] += w - self.self_weight[v]
        self.self_weight[v] = w

    def weight(self, u, v):
        return self.in_edges[v].get(u, 0.0)

    def edges(self):
        for v in range(self.n):
            for u, w in self.in_edges[v].items():
                yield u, v, w

    def check_update(self, e):
        """
        Validate an update against the current weights without applying it.

        Returns:
            the weight of (u, v) after the update
        """
        self._check_vertex(e.u)
        self._check_vertex(e.v)
        if e.u == e.v:
            raise WeightRangeError(f'self loop ({e.u}, {e.v}) is not supported')
        if not (e.delta > 0 and math.isfinite(e.delta)):
            raise WeightRangeError(
                f'update delta {e.delta} is not a positive finite number')
        old = self.in_edges[e.v].get(e.u)
        if e.sign == '+':
            new = (old or 0.0) + e.delta
            if not self.is_lt and new > 1 + WEIGHT_TOL:
                raise WeightRangeError(
                    f'update {tuple(e)} would raise IC weight of ({e.u}, {e.v}) to {new} > 1'
                )
            if not self.is_lt:
                new = min(new, 1.0)
        elif e.sign == '-':
            if old is None:
                raise WeightRangeError(
                    f'update {tuple(e)} decreases the absent edge ({e.u}, {e.v})'
                )
            new = old - e.delta
            if new < -WEIGHT_TOL:
                raise WeightRangeError(
                    f'update {tuple(e)} would push weight of ({e.u}, {e.v}) below 0'
                )
            new = max(new, 0.0)
        else:
            raise WeightRangeError(f'unknown update sign {e.sign!r}')
        return new

    def apply_update(self, e):
        """
        Apply an edge weight update.

        An increase on an absent edge creates it; a decrease to 0 keeps the
        edge with weight 0.

        Returns:
            v, the only vertex whose in-distribution changed
        """
        new = self.check_update(e)
        old = self.in_edges[e.v].get(e.u)
        if old is None:
            self.m += 1
            old = 0.0
        self.in_edges[e.v][e.u] = new
        self.out_edges[e.u][e.v] = new
        if self.is_lt:
            self.total_in[e.v] += new - old
        return e.v

    def lt_choice_distribution(self, v):
        """
        The live-edge choice of v under LT: in-neighbor u with probability
        w_uv / W_v, no edge with probability w_v / W_v.

        Returns:
            (list of (u, p_uv), stop probability)
        """
        if not self.is_lt:
            raise ValueError('choice distributions are defined for LT only')
        total = self.total_in[v]
        if total <= 0:
            return [], 1.0
        choices = [(u, w / total) for u, w in self.in_edges[v].items()]
        return choices, self.self_weight[v] / total

    def recompute_total_in(self, v):
        return self.self_weight[v] + sum(self.in_edges[v].values())

    def copy(self):
        other = Graph(self.n, self.model)
        other.m = self.m
        other.in_edges = [dict(d) for d in self.in_edges]
        other.out_edges = [dict(d) for d in self.out_edges]
        if self.is_lt:
            other.self_weight = list(self.self_weight)
            other.total_in = list(self.total_in)
        return other

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n}, m={self.m}, model={self.model})'


def _open_lines(source):
    if isinstance(source, str):
        with open(source, 'r', encoding='utf-8') as f:
            for line in f:
                yield line
    else:
        for line in source:
            yield line


def load_snapshot(source):
    """
    Read a graph file.

    Format: a header `n m MODEL`, then m edge lines `u v w`; LT files may add
    `v <id> <w>` lines overriding a self-weight (default 1.0). Lines starting
    with `#` are comments.

    Arguments:
        source: a path or an iterable of text lines
    """
    g = None
    num_edges = 0
    expected_edges = 0
    for line_no, line in enumerate(_open_lines(source), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        try:
            if g is None:
                if len(tokens) != 3:
                    raise GraphFormatError('header must be `n m MODEL`',
                                           line_no)
                n, expected_edges, model = int(tokens[0]), int(
                    tokens[1]), tokens[2].upper()
                if model not in MODELS:
                    raise GraphFormatError(f'unknown model {tokens[2]}',
                                           line_no)
                g = Graph(n, model)
            elif tokens[0] == 'v':
                if len(tokens) != 3:
                    raise GraphFormatError(
                        'self-weight line must be `v <id> <w>`', line_no)
                g.set_self_weight(int(tokens[1]), float(tokens[2]))
            else:
                if len(tokens) != 3:
                    raise GraphFormatError('edge line must be `u v w`',
                                           line_no)
                g.add_edge(int(tokens[0]), int(tokens[1]), float(tokens[2]))
                num_edges += 1
        except WeightRangeError as err:
            raise GraphFormatError(str(err), line_no) from err
        except ValueError as err:
            if isinstance(err, GraphFormatError):
                raise
            raise GraphFormatError(f'cannot parse {line!r}: {err}',
                                   line_no) from err
    if g is None:
        raise GraphFormatError('empty graph file')
    if num_edges != expected_edges:
        raise GraphFormatError(
            f'header announces {expected_edges} edges but {num_edges} were read'
        )
    logger.info(f'Loaded {g}')
    return g


def save_snapshot(g, sink):
    """
    Write `g` in the format read by `load_snapshot`; weights keep their exact
    float value.
    """
    lines = [f'{g.n} {g.m} {g.model}\n']
    lines.extend(f'{u} {v} {w!r}\n' for u, v, w in g.edges())
    if g.is_lt:
        lines.extend(f'v {v} {w!r}\n' for v, w in enumerate(g.self_weight)
                     if w != DEFAULT_SELF_WEIGHT)
    if isinstance(sink, str):
        with open(sink, 'w', encoding='utf-8') as f:
            f.writelines(lines)
    else:
        sink.writelines(lines)


def read_stream(source):
    """
    Iterate over the updates of a stream file with lines `u v S delta t`.
    """
    for line_no, line in enumerate(_open_lines(source), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 5:
            raise GraphFormatError('update line must be `u v S delta t`',
                                   line_no)
        try:
            yield make_event(int(tokens[0]), int(tokens[1]), tokens[2],
                             float(tokens[3]), int(tokens[4]))
        except ValueError as err:
            raise GraphFormatError(f'cannot parse {line!r}: {err}',
                                   line_no) from err


def write_stream(events, sink):
    lines = [f'{e.u} {e.v} {e.sign} {e.delta!r} {e.t}\n' for e in events]
    if isinstance(sink, str):
        with open(sink, 'w', encoding='utf-8') as f:
            f.writelines(lines)
    else:
        sink.writelines(lines)


def from_networkx(nx_graph, model='LT', weight='weight', default=1.0):
    """
    Build a Graph from a networkx DiGraph whose nodes are 0..n-1.
    """
    g = Graph(nx_graph.number_of_nodes(), model)
    for u, v, data in nx_graph.edges(data=True):
        if u == v:
            continue
        g.add_edge(int(u), int(v), data.get(weight, default))
    return g


def to_networkx(g):
    nx_graph = nx.DiGraph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_weighted_edges_from(g.edges())
    return nx_graph
