"""Addressable Fibonacci heap.

Insert and decrease-key are O(1) amortized; find-min is O(1); delete,
delete-min and increasing a key (done as delete + insert) are O(log n)
amortized.  Items are ordered by ``(key, tiebreak)`` so equal keys drain
in a deterministic order.
"""

from __future__ import annotations

import itertools

__all__ = ["FibonacciHeap", "HeapHandle"]


class HeapHandle:
    """Node of the heap; doubles as the caller's handle to the stored item."""

    __slots__ = ("key", "tiebreak", "payload", "parent", "child", "left", "right", "degree", "mark", "live")

    def __init__(self, key, tiebreak, payload):
        self.key = key
        self.tiebreak = tiebreak
        self.payload = payload
        self.parent = None
        self.child = None
        self.left = self
        self.right = self
        self.degree = 0
        self.mark = False
        self.live = True

    def __repr__(self):
        return f"HeapHandle(key={self.key!r}, payload={self.payload!r})"


def _splice_out(x):
    x.left.right = x.right
    x.right.left = x.left
    x.left = x.right = x


def _insert_right(anchor, x):
    x.right = anchor.right
    x.left = anchor
    anchor.right.left = x
    anchor.right = x


class FibonacciHeap:
    def __init__(self):
        self._min = None
        self._size = 0
        self._seq = itertools.count()
        self.comparisons = 0

    def __len__(self):
        return self._size

    def __bool__(self):
        return self._size > 0

    def _less(self, a, b):
        self.comparisons += 1
        if a.key == b.key:
            return a.tiebreak < b.tiebreak
        return a.key < b.key

    def _add_root(self, x):
        x.parent = None
        x.mark = False
        if self._min is None:
            x.left = x.right = x
            self._min = x
        else:
            _insert_right(self._min, x)

    def insert(self, key, payload=None, tiebreak=None) -> HeapHandle:
        """Add an item; ``tiebreak`` orders equal keys (default: insertion order)."""
        x = HeapHandle(key, next(self._seq) if tiebreak is None else tiebreak, payload)
        self._add_root(x)
        if self._less(x, self._min):
            self._min = x
        self._size += 1
        return x

    def find_min(self):
        """``(key, payload)`` of a minimum item, or ``None`` when empty."""
        if self._min is None:
            return None
        return self._min.key, self._min.payload

    def min_handle(self):
        return self._min

    def _check(self, h):
        if not isinstance(h, HeapHandle) or not h.live:
            raise ValueError("stale heap handle")

    def _cut(self, x, p):
        if x.right is x:
            p.child = None
        elif p.child is x:
            p.child = x.right
        _splice_out(x)
        p.degree -= 1
        self._add_root(x)

    def _cascading_cut(self, p):
        while p.parent is not None:
            if not p.mark:
                p.mark = True
                return
            z = p.parent
            self._cut(p, z)
            p = z

    def decrease_key(self, h: HeapHandle, new_key, payload=None):
        self._check(h)
        if new_key > h.key:
            raise ValueError(f"new key {new_key} is greater than current key {h.key}")
        h.key = new_key
        if payload is not None:
            h.payload = payload
        p = h.parent
        if p is not None and self._less(h, p):
            self._cut(h, p)
            self._cascading_cut(p)
        if self._less(h, self._min):
            self._min = h

    def reassign_key(self, h: HeapHandle, new_key, payload=None) -> HeapHandle:
        """Replace the key in either direction; an increase is delete + insert."""
        self._check(h)
        if new_key <= h.key:
            self.decrease_key(h, new_key, payload)
            return h
        self._remove(h)
        h.key = new_key
        if payload is not None:
            h.payload = payload
        h.live = True
        h.child = None
        h.degree = 0
        self._add_root(h)
        if self._less(h, self._min):
            self._min = h
        self._size += 1
        return h

    def delete(self, h: HeapHandle):
        self._check(h)
        self._remove(h)

    def delete_min(self):
        """Remove and return ``(key, payload)`` of a minimum item, or ``None`` when empty."""
        x = self._min
        if x is None:
            return None
        self._remove(x)
        return x.key, x.payload

    def _remove(self, x):
        p = x.parent
        if p is not None:
            self._cut(x, p)
            self._cascading_cut(p)
        # x is now a root: promote its children
        c = x.child
        for _ in range(x.degree):
            nxt = c.right
            _splice_out(c)
            self._add_root(c)
            c = nxt
        x.child = None
        x.degree = 0
        if self._min is x:
            if x.right is x:
                self._min = None
            else:
                self._min = x.right
                _splice_out(x)
                self._consolidate()
        else:
            _splice_out(x)
        x.live = False
        self._size -= 1

    def _link(self, y, x):
        _splice_out(y)
        y.parent = x
        y.mark = False
        if x.child is None:
            x.child = y
            y.left = y.right = y
        else:
            _insert_right(x.child, y)
        x.degree += 1

    def _consolidate(self):
        roots = []
        x = self._min
        while True:
            roots.append(x)
            x = x.right
            if x is self._min:
                break
        table = {}
        for x in roots:
            d = x.degree
            while d in table:
                y = table.pop(d)
                if self._less(y, x):
                    x, y = y, x
                self._link(y, x)
                d += 1
            table[d] = x
        best = None
        for x in table.values():
            if best is None or self._less(x, best):
                best = x
        self._min = best
