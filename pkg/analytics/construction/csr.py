import numpy as np

from analytics.exceptions import InvalidNode


class CsrGraph(object):
    """
    Compressed sparse row adjacency.

    ``offsets`` has length n + 1 and row ``u`` owns ``targets[offsets[u]:offsets[u + 1]]``,
    sorted by target id. ``keys`` maps the dense ids back to external node keys and
    ``id_map`` to ``(entity label, property graph id)`` pairs.
    """

    def __init__(self, offsets, targets, weights=None, keys=None, directed=True, id_map=None):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.targets = np.asarray(targets, dtype=np.int64)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        n = len(self.offsets) - 1
        self.keys = tuple(keys) if keys is not None else tuple(range(n))
        self.directed = directed
        self.id_map = tuple(id_map) if id_map is not None else tuple((None, i) for i in range(n))
        self._index = None
        self._text_index = None
        self.check()

    @classmethod
    def from_edges(cls, n, sources, targets, weights=None, **kwargs):
        sources = np.asarray(sources, dtype=np.int64).reshape(-1)
        targets = np.asarray(targets, dtype=np.int64).reshape(-1)
        if len(sources) != len(targets):
            raise ValueError('sources and targets differ in length')
        if len(sources) and (sources.min() < 0 or sources.max() >= n or targets.min() < 0 or targets.max() >= n):
            raise ValueError('edge endpoint outside [0, %d)' % n)
        order = np.lexsort((targets, sources))
        counts = np.bincount(sources, minlength=n) if n else np.zeros(0, dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64).reshape(-1)[order]
        return cls(offsets, targets[order], weights, **kwargs)

    def check(self):
        n = self.n
        if n < 0 or self.offsets[0] != 0:
            raise ValueError('offsets must start at 0')
        if np.any(np.diff(self.offsets) < 0):
            raise ValueError('offsets must be nondecreasing')
        if len(self.targets) != self.offsets[-1]:
            raise ValueError('targets length must equal offsets[n]')
        if len(self.targets) and (self.targets.min() < 0 or self.targets.max() >= n):
            raise ValueError('target id outside [0, %d)' % n)
        if self.weights is not None and len(self.weights) != len(self.targets):
            raise ValueError('weights must align with targets')
        if len(self.keys) != n:
            raise ValueError('keys must cover every node')

    @property
    def n(self):
        return len(self.offsets) - 1

    @property
    def edge_count(self):
        return len(self.targets)

    @property
    def weighted(self):
        return self.weights is not None

    def neighbors(self, u):
        return self.targets[self.offsets[u]:self.offsets[u + 1]]

    def neighbor_weights(self, u):
        if self.weights is None:
            return np.ones(self.offsets[u + 1] - self.offsets[u])
        return self.weights[self.offsets[u]:self.offsets[u + 1]]

    def sources(self):
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.offsets))

    def edges(self):
        """
        Reconstruct the edge list as (source, target, weight) triples in row order.
        """
        weights = self.weights if self.weights is not None else np.ones(len(self.targets))
        return [(int(u), int(v), float(w)) for u, v, w in zip(self.sources(), self.targets, weights)]

    def reverse(self):
        return CsrGraph.from_edges(
            self.n, self.targets, self.sources(), self.weights,
            keys=self.keys, directed=self.directed, id_map=self.id_map,
        )

    def filter_edges(self, mask):
        mask = np.asarray(mask, dtype=bool)
        return CsrGraph.from_edges(
            self.n, self.sources()[mask], self.targets[mask],
            None if self.weights is None else self.weights[mask],
            keys=self.keys, directed=self.directed, id_map=self.id_map,
        )

    def index_of(self, ref):
        """
        Resolve an external key to a dense id; a key given as text matches a key
        with the same text form.
        """
        if self._index is None:
            self._text_index = {str(key): i for i, key in enumerate(self.keys)}
            self._index = {key: i for i, key in enumerate(self.keys)}
        if ref in self._index:
            return self._index[ref]
        if str(ref) in self._text_index:
            return self._text_index[str(ref)]
        raise InvalidNode('node %r is not in the graph' % (ref,), node=str(ref))

    def __repr__(self):
        return '<CsrGraph n=%d m=%d directed=%s weighted=%s>' % (
            self.n, self.edge_count, self.directed, self.weighted)
