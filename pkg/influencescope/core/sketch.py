"""
Reverse-reachable (RR) set sketches of a dynamic graph.

An RR set collects the vertices that reach a uniformly random root through
live edges. A pool of M such sets gives the unbiased estimator
n * D(S) / M of the influence spread I(S), where D(S) counts the sets that
intersect S.

After an update whose in-distribution changed at v, only the randomness a
set drew at v is redrawn: an LT walk keeps its prefix up to v and walks on
from there, an IC set keeps the coins of every other edge it examined.
Each slot thus stays distributed as a fresh sample on the updated graph.
"""
import logging
from collections import defaultdict, deque

import numpy as np

from influencescope.core.errors import InvariantViolation
from influencescope.core.rank import DegreeIndex

logger = logging.getLogger(__name__)


class RRSet(object):
    """
    One poll: the stored root, the reverse-reachable members and, under LT,
    the walk that produced them (root first). `cost` counts the vertices
    visited plus the edges examined while generating the set.

    LT sets keep `lt_costs`, the cost accumulated on arrival at each walk
    vertex; IC sets keep `coins`, the uniform draw of every examined edge
    (u, x), the edge being live when the draw is below w_ux.
    """
    __slots__ = ['id', 'root', 'members', 'lt_path', 'cost', 'lt_costs',
                 'coins']

    def __init__(self,
                 root,
                 members,
                 lt_path=None,
                 cost=0,
                 id=-1,
                 lt_costs=None,
                 coins=None):
        self.id = id
        self.root = root
        self.members = members
        self.lt_path = lt_path
        self.cost = cost
        self.lt_costs = lt_costs
        self.coins = coins

    def __contains__(self, u):
        return u in self.members

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return isinstance(other, RRSet) and (
            self.id, self.root, self.members, self.lt_path, self.cost,
            self.lt_costs, self.coins) == (other.id, other.root,
                                           other.members, other.lt_path,
                                           other.cost, other.lt_costs,
                                           other.coins)

    def __repr__(self):
        return f'RRSet(id={self.id}, root={self.root}, members={sorted(self.members)})'


def _walk_lt(g, path, costs, rng):
    # continues the walk from path[-1]; path and costs are extended in place
    members = set(path)
    cost = costs[-1]
    x = path[-1]
    while True:
        total = g.total_in[x]
        if total <= 0:
            break
        r = rng.random() * total
        if r < g.self_weight[x]:
            break
        r -= g.self_weight[x]
        chosen, fallback = None, None
        for u, w in g.in_edges[x].items():
            cost += 1
            if w > 0:
                fallback = u
            if r < w:
                chosen = u
                break
            r -= w
        if chosen is None:
            # rounding left r past the last edge
            chosen = fallback
        if chosen is None or chosen in members:
            # cycle closure of the live-edge functional graph
            break
        members.add(chosen)
        path.append(chosen)
        cost += 1
        costs.append(cost)
        x = chosen
    return RRSet(path[0], frozenset(members), tuple(path), cost,
                 lt_costs=tuple(costs))


def _bfs_ic(g, root, rng, coins=None, redraw=None):
    # coins of edges into `redraw`, and of edges not in `coins`, are drawn anew
    stored = coins or {}
    kept = {}
    members = {root}
    queue = deque([root])
    cost = 1
    while queue:
        x = queue.popleft()
        in_edges = g.in_edges[x]
        if not in_edges:
            continue
        if x == redraw:
            missing = list(in_edges)
        else:
            missing = [u for u in in_edges if (u, x) not in stored]
        fresh = dict(zip(missing, rng.random(len(missing)).tolist())) \
            if missing else {}
        cost += len(in_edges)
        for u, w in in_edges.items():
            coin = fresh[u] if u in fresh else stored[(u, x)]
            kept[(u, x)] = coin
            if coin < w and u not in members:
                members.add(u)
                queue.append(u)
                cost += 1
    return RRSet(root, frozenset(members), None, cost, coins=kept)


def generate_rr(g, root, rng):
    """
    Sample the RR set of `root` on the (frozen) graph `g`.

    LT: a reverse random walk that stops with probability w_x / W_x at each
    vertex x, otherwise moves to in-neighbor u with probability w_ux / W_x,
    and stops when it reaches a vertex already on the walk.
    IC: a reverse BFS that flips one coin per in-edge of every vertex
    entering the set, in adjacency order.
    """
    if g.is_lt:
        return _walk_lt(g, [root], [1], rng)
    return _bfs_ic(g, root, rng)


def resample_after_update(g, rr, v, rng):
    """
    Redraw the part of `rr` that depends on the in-distribution of `v`, a
    member of `rr`, on the updated graph `g`.

    LT keeps the walk up to and including v and walks on from v; cycle
    closure still sees the kept prefix. IC reruns the BFS from the same
    root with the stored coins, drawing new coins for the in-edges of v and
    for edges examined for the first time.

    Returns:
        (the new RRSet, the cost of the redrawn part)
    """
    if rr.lt_path is not None:
        idx = rr.lt_path.index(v)
        new = _walk_lt(g, list(rr.lt_path[:idx + 1]),
                       list(rr.lt_costs[:idx + 1]), rng)
        return new, new.cost - rr.lt_costs[idx]
    if rr.coins is not None:
        new = _bfs_ic(g, rr.root, rng, coins=rr.coins, redraw=v)
        return new, new.cost
    raise ValueError(
        f'RR set at slot {rr.id} was not sampled from a graph and cannot be refreshed'
    )


class RRCollection(object):
    """
    A pool of RR sets with its inverted index and degree structure.

    Arguments:
        n (int): number of vertices of the sampled graph
        ranks (list): ranks of the KthTracker objects to attach to the index

    Attributes:
        sets (list): RR sets in append order, the position is the slot id
        inv (dict): vertex -> set of slot ids whose members contain it
        index (DegreeIndex): D(u) = |inv[u]|
        total_cost (int): sum of the generation costs, C(R)
        refresh_cost (int): cost of the parts redrawn by `refresh_affected`,
            summed over the lifetime of the pool
    """
    def __init__(self, n, ranks=()):
        self.n = n
        self.sets = []
        self.inv = defaultdict(set)
        self.index = DegreeIndex(ranks)
        self.total_cost = 0
        self.refresh_cost = 0

    @property
    def M(self):
        return len(self.sets)

    def __len__(self):
        return len(self.sets)

    def _insert(self, rr):
        for u in rr.members:
            self.inv[u].add(rr.id)
            self.index.increase(u)
        self.total_cost += rr.cost

    def _erase(self, rr):
        for u in rr.members:
            slots = self.inv[u]
            slots.discard(rr.id)
            if not slots:
                del self.inv[u]
            self.index.decrease(u)
        self.total_cost -= rr.cost

    def append(self, g, rng):
        """
        Add one RR set rooted at a fresh uniform vertex.

        Returns:
            the slot id of the new set
        """
        if self.n < 1:
            raise ValueError('cannot sample RR sets on an empty graph')
        root = int(rng.integers(self.n))
        rr = generate_rr(g, root, rng)
        rr.id = len(self.sets)
        self.sets.append(rr)
        self._insert(rr)
        return rr.id

    def add_members(self, members, root=None):
        """
        Add a set given by its members instead of sampling it, as used by
        synthetic pools; the root defaults to the smallest member.
        """
        members = frozenset(int(u) for u in members)
        if not members:
            raise ValueError('an RR set holds at least its root')
        root = min(members) if root is None else root
        if root not in members:
            raise ValueError(f'root {root} is not a member of {sorted(members)}')
        rr = RRSet(root, members, None, len(members))
        rr.id = len(self.sets)
        self.sets.append(rr)
        self._insert(rr)
        return rr.id

    def remove_last(self):
        if not self.sets:
            raise ValueError('cannot remove from an empty RR collection')
        rr = self.sets.pop()
        self._erase(rr)
        return rr

    def truncate(self, size):
        while len(self.sets) > size:
            self.remove_last()

    def affected_slots(self, v):
        return sorted(self.inv.get(v, ()))

    def refresh_affected(self, g, v, rng):
        """
        Redraw, in every RR set containing `v`, the part that depends on the
        in-distribution of `v` (see `resample_after_update`).

        `g` must already reflect the update whose affected vertex is `v`;
        sets without `v` never sampled the in-distribution of `v` and are
        left untouched.

        Returns:
            the number of refreshed sets
        """
        slots = self.affected_slots(v)
        for slot in slots:
            old = self.sets[slot]
            self._erase(old)
            rr, redrawn = resample_after_update(g, old, v, rng)
            self.refresh_cost += redrawn
            rr.id = slot
            self.sets[slot] = rr
            self._insert(rr)
        return len(slots)

    def degree(self, u):
        return len(self.inv.get(u, ()))

    def degree_of_set(self, seeds):
        """
        D(S), the number of RR sets intersecting `seeds`.
        """
        covered = set()
        for u in seeds:
            covered.update(self.inv.get(u, ()))
        return len(covered)

    def estimate_influence(self, seeds):
        if self.M == 0:
            raise ValueError('influence estimates need at least one RR set')
        return self.n * self.degree_of_set(seeds) / self.M

    def membership_frequencies(self):
        freq = np.zeros(self.n, dtype=np.float64)
        for u, slots in self.inv.items():
            freq[u] = len(slots)
        return freq / max(self.M, 1)

    def check_consistency(self):
        """
        Recompute the inverted index, the degrees and C(R) from scratch and
        raise InvariantViolation on any mismatch.
        """
        inv = defaultdict(set)
        cost = 0
        for slot, rr in enumerate(self.sets):
            if rr.id != slot:
                raise InvariantViolation(f'RR set at slot {slot} has id {rr.id}')
            if rr.root not in rr.members:
                raise InvariantViolation(f'root {rr.root} missing from slot {slot}')
            if rr.lt_path is not None and (len(set(rr.lt_path)) != len(
                    rr.lt_path) or set(rr.lt_path) != rr.members):
                raise InvariantViolation(f'LT path of slot {slot} is not simple')
            if rr.lt_path is not None and (rr.lt_costs is None or len(
                    rr.lt_costs) != len(rr.lt_path)):
                raise InvariantViolation(f'LT costs of slot {slot} do not follow its path')
            if rr.coins is not None and any(x not in rr.members
                                            for _, x in rr.coins):
                raise InvariantViolation(
                    f'slot {slot} holds coins of edges into non-members')
            for u in rr.members:
                inv[u].add(slot)
            cost += rr.cost
        if dict(inv) != {u: s for u, s in self.inv.items() if s}:
            raise InvariantViolation('inverted index out of sync')
        degrees = {u: len(s) for u, s in inv.items()}
        if degrees != self.index.degrees():
            raise InvariantViolation('degree index out of sync')
        if cost != self.total_cost:
            raise InvariantViolation(
                f'C(R) is {self.total_cost}, recomputed {cost}')
        try:
            self.index.check_consistency()
        except AssertionError as err:
            raise InvariantViolation(str(err)) from err
