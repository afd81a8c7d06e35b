"""
Bucketed doubly linked degree structure.

Vertices sharing a degree are grouped under one head node (`_Bucket`); the
heads form a doubly linked list ordered by strictly decreasing degree, from
`top` down to `bottom`. Vertices with degree 0 are not stored. A unit degree
change moves a vertex to an adjacent head, creating or dropping heads as
needed, so every mutation costs O(1) pointer operations. `KthTracker`
follows the head holding the k-th largest degree across those moves.
"""
import logging

logger = logging.getLogger(__name__)


class _Bucket(object):
    __slots__ = ['degree', 'members', 'up', 'down']

    def __init__(self, degree):
        self.degree = degree
        # dict keeps insertion order and O(1) removal
        self.members = {}
        self.up = None
        self.down = None

    @property
    def num(self):
        return len(self.members)


class KthTracker(object):
    """
    Track the k-th largest degree of a DegreeIndex in O(1) per unit change.

    State is the head `head` whose degree is the k-th largest one and the
    number `above` of vertices with a strictly larger degree; the bias
    b = k - above counts how far into `head` the k-th vertex sits.
    With fewer than k vertices of positive degree, `head` is None and the
    value is 0.
    """
    def __init__(self, k):
        if k < 1:
            raise ValueError(f'k must be positive, but got {k}')
        self.k = k
        self.head = None
        self.above = 0

    @property
    def bias(self):
        return self.k - self.above if self.head is not None else 0

    def value(self):
        return self.head.degree if self.head is not None else 0

    def _reset(self, index):
        # only used when attaching to a populated index or on cold start
        self.head, self.above = None, 0
        if index.size < self.k:
            return
        above = 0
        bucket = index.top
        while above + bucket.num < self.k:
            above += bucket.num
            bucket = bucket.down
        self.head, self.above = bucket, above

    def _after_increase(self, index, old_degree, target):
        if self.head is None:
            if index.size == self.k:
                self.head = index.bottom
                self.above = index.size - index.bottom.num
            return
        if old_degree != self.head.degree:
            return
        self.above += 1
        if self.above == self.k:
            # b was 1: the k-th vertex moved up with u
            self.head = target
            self.above -= target.num

    def _after_decrease(self, index, old_degree, old_head_degree,
                        old_head_num, target):
        if self.head is None:
            return
        if old_degree == old_head_degree + 1:
            self.above -= 1
        elif old_degree == old_head_degree:
            if self.above + old_head_num == self.k:
                # b was H_k.num: the k-th vertex is the one moved down
                if target is None:
                    self.head, self.above = None, 0
                else:
                    self.head = target
                    self.above = self.k - 1


class DegreeIndex(object):
    """
    Degrees D(u) >= 1 grouped in buckets ordered by decreasing degree.

    Arguments:
        ranks (list): ranks k of the KthTracker objects to attach
    """
    def __init__(self, ranks=()):
        self.top = None
        self.bottom = None
        self.locator = {}
        self.trackers = {}
        # pointer updates done by mutations, checked by the complexity tests
        self.pointer_ops = 0
        for k in ranks:
            self.attach(k)

    @property
    def size(self):
        return len(self.locator)

    def __len__(self):
        return len(self.locator)

    def __contains__(self, u):
        return u in self.locator

    def attach(self, k):
        if k not in self.trackers:
            tracker = KthTracker(k)
            tracker._reset(self)
            self.trackers[k] = tracker
        return self.trackers[k]

    def tracker(self, k):
        return self.trackers[k]

    def degree(self, u):
        bucket = self.locator.get(u)
        return bucket.degree if bucket is not None else 0

    def max_degree(self):
        return self.top.degree if self.top is not None else 0

    def value(self, k):
        return self.trackers[k].value()

    # ---------------------------------------------------------------- #
    # linked list primitives, each O(1)
    # ---------------------------------------------------------------- #
    def _link_above(self, bucket, below):
        """Insert `bucket` right above `below` (None means at the bottom)."""
        if below is None:
            bucket.up = self.bottom
            bucket.down = None
            if self.bottom is not None:
                self.bottom.down = bucket
            self.bottom = bucket
            if self.top is None:
                self.top = bucket
        else:
            bucket.down = below
            bucket.up = below.up
            if below.up is not None:
                below.up.down = bucket
            else:
                self.top = bucket
            below.up = bucket
        self.pointer_ops += 1

    def _link_below(self, bucket, above):
        """Insert `bucket` right below `above` (never None here)."""
        bucket.up = above
        bucket.down = above.down
        if above.down is not None:
            above.down.up = bucket
        else:
            self.bottom = bucket
        above.down = bucket
        self.pointer_ops += 1

    def _unlink(self, bucket):
        if bucket.up is not None:
            bucket.up.down = bucket.down
        else:
            self.top = bucket.down
        if bucket.down is not None:
            bucket.down.up = bucket.up
        else:
            self.bottom = bucket.up
        bucket.up = bucket.down = None
        self.pointer_ops += 1

    def _detach(self, u, bucket):
        del bucket.members[u]
        self.pointer_ops += 1
        if not bucket.members:
            self._unlink(bucket)

    # ---------------------------------------------------------------- #
    # unit mutations
    # ---------------------------------------------------------------- #
    def increase(self, u):
        bucket = self.locator.get(u)
        old_degree = bucket.degree if bucket is not None else 0
        new_degree = old_degree + 1

        if bucket is None:
            anchor = self.bottom
            if anchor is not None and anchor.degree == new_degree:
                target = anchor
            else:
                target = _Bucket(new_degree)
                if anchor is None:
                    self._link_above(target, None)
                else:
                    self._link_below(target, anchor)
        else:
            if bucket.up is not None and bucket.up.degree == new_degree:
                target = bucket.up
            else:
                target = _Bucket(new_degree)
                self._link_above(target, bucket)
            self._detach(u, bucket)

        target.members[u] = None
        self.locator[u] = target
        self.pointer_ops += 1

        for tracker in self.trackers.values():
            tracker._after_increase(self, old_degree, target)

    def decrease(self, u):
        bucket = self.locator.get(u)
        if bucket is None:
            raise ValueError(f'vertex {u} has degree 0 and cannot decrease')
        old_degree = bucket.degree
        new_degree = old_degree - 1
        snapshot = [(t, t.head.degree if t.head is not None else None,
                     t.head.num if t.head is not None else 0)
                    for t in self.trackers.values()]

        if new_degree == 0:
            target = None
            del self.locator[u]
        else:
            if bucket.down is not None and bucket.down.degree == new_degree:
                target = bucket.down
            else:
                target = _Bucket(new_degree)
                self._link_below(target, bucket)
            target.members[u] = None
            self.locator[u] = target
            self.pointer_ops += 1
        self._detach(u, bucket)

        for tracker, head_degree, head_num in snapshot:
            tracker._after_decrease(self, old_degree, head_degree, head_num,
                                    target)

    def decrease_by(self, u, amount):
        for _ in range(amount):
            self.decrease(u)

    def remove(self, u):
        """
        Drop `u` whatever its degree; only allowed on copies without trackers.
        """
        if self.trackers:
            raise ValueError('remove() would break the attached trackers')
        bucket = self.locator.pop(u, None)
        if bucket is not None:
            self._detach(u, bucket)

    # ---------------------------------------------------------------- #
    # read-only queries
    # ---------------------------------------------------------------- #
    def buckets(self):
        bucket = self.top
        while bucket is not None:
            yield bucket
            bucket = bucket.down

    def iterate_at_least(self, threshold):
        """
        Yield (vertex, degree) for every vertex with degree >= threshold,
        in non-increasing degree order.
        """
        for bucket in self.buckets():
            if bucket.degree < threshold:
                break
            for u in bucket.members:
                yield u, bucket.degree

    def top_vertex(self):
        """
        The smallest vertex id among those with the largest degree.
        """
        if self.top is None:
            return None
        return min(self.top.members)

    def snapshot_above(self, threshold):
        """
        A detached, tracker-free copy holding only the vertices with
        degree > threshold; threshold=-1 copies everything.
        """
        other = DegreeIndex()
        for bucket in self.buckets():
            if bucket.degree <= threshold:
                break
            copied = _Bucket(bucket.degree)
            copied.members = dict(bucket.members)
            other._link_above(copied, None)
            for u in copied.members:
                other.locator[u] = copied
        other.pointer_ops = 0
        return other

    def degrees(self):
        return {u: bucket.degree for u, bucket in self.locator.items()}

    def check_consistency(self):
        """
        Verify bucket ordering, locator coherence and every tracker against
        a full sort. Raises AssertionError on the first mismatch.
        """
        previous = None
        count = 0
        for bucket in self.buckets():
            assert bucket.members, f'empty bucket at degree {bucket.degree}'
            assert bucket.degree >= 1, 'degree-0 bucket kept in the index'
            if previous is not None:
                assert previous.degree > bucket.degree, \
                    'bucket degrees are not strictly decreasing'
                assert bucket.up is previous, 'broken up pointer'
            for u in bucket.members:
                assert self.locator.get(u) is bucket, f'stale locator of {u}'
            count += bucket.num
            previous = bucket
        assert previous is self.bottom, 'broken bottom pointer'
        assert count == len(self.locator), 'locator holds detached vertices'

        ordered = sorted((b.degree for b in self.locator.values()),
                         reverse=True)
        for k, tracker in self.trackers.items():
            expected = ordered[k - 1] if len(ordered) >= k else 0
            assert tracker.value() == expected, \
                f'tracker k={k} reports {tracker.value()} instead of {expected}'
            if tracker.head is not None:
                assert 1 <= tracker.bias <= tracker.head.num, \
                    f'tracker k={k} has bias {tracker.bias} outside [1, {tracker.head.num}]'
