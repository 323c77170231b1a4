"""
Payload types produced by the built-in executors.

Every payload knows its item count and can render itself as plain JSON data; the
tool registry builds ``RawResult`` stats from those two hooks.
"""
import numpy as np


class NodeScores(object):
    """
    A real score per dense node id.

    ``labeling`` marks component labelings, whose values are representative ids
    rather than scores.
    """

    def __init__(self, values, keys, converged=True, iterations=0, delta=0.0, labeling=False):
        self.values = np.asarray(values, dtype=np.float64)
        self.keys = tuple(keys)
        self.converged = converged
        self.iterations = iterations
        self.delta = delta
        self.labeling = labeling
        if len(self.keys) != len(self.values):
            raise ValueError('one key per score is required')
        if not np.all(np.isfinite(self.values)):
            raise ValueError('scores must be finite')

    def __len__(self):
        return len(self.values)

    @property
    def item_count(self):
        return len(self.values)

    def items(self):
        return [(self.keys[i], float(v)) for i, v in enumerate(self.values)]

    def score_of(self, key):
        return float(self.values[self.keys.index(key)])

    def to_data(self):
        data = {
            'scores': [[plain(k), float(v)] for k, v in zip(self.keys, self.values)],
            'converged': self.converged,
            'iterations': self.iterations,
        }
        if self.labeling:
            data['labeling'] = True
        return data


class NodeSet(object):
    """
    An ordered set of nodes, optionally ranked.
    """

    def __init__(self, nodes, scores=None, edge_count=None):
        self.nodes = tuple(nodes)
        self.scores = None if scores is None else tuple(float(s) for s in scores)
        self.edge_count = edge_count

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    @property
    def item_count(self):
        return len(self.nodes)

    def to_data(self):
        data = {'nodes': [plain(n) for n in self.nodes]}
        if self.scores is not None:
            data['scores'] = list(self.scores)
        if self.edge_count is not None:
            data['edge_count'] = self.edge_count
        return data


class CycleSet(object):
    """
    Simple cycles in canonical rotation, keyed by external node keys.

    ``flows`` holds, per cycle, the flow of each consecutive pair (closing pair last),
    or is None on unweighted graphs.
    """

    def __init__(self, cycles, flows=None, truncated=False):
        self.cycles = tuple(tuple(c) for c in cycles)
        self.flows = None if flows is None else tuple(tuple(float(w) for w in f) for f in flows)
        self.truncated = truncated

    def __len__(self):
        return len(self.cycles)

    @property
    def item_count(self):
        return len(self.cycles)

    def bottleneck(self, i):
        return min(self.flows[i]) if self.flows is not None else None

    def total(self, i):
        return sum(self.flows[i]) if self.flows is not None else None

    def node_union(self):
        seen = []
        members = set()
        for cycle in self.cycles:
            for node in cycle:
                if node not in members:
                    members.add(node)
                    seen.append(node)
        return seen

    def pairs(self):
        distinct = set()
        for cycle in self.cycles:
            for i, node in enumerate(cycle):
                distinct.add((node, cycle[(i + 1) % len(cycle)]))
        return distinct

    def to_data(self):
        data = {'cycles': [[plain(n) for n in c] for c in self.cycles], 'truncated': self.truncated}
        if self.flows is not None:
            data['bottleneck'] = [self.bottleneck(i) for i in range(len(self.cycles))]
            data['total'] = [self.total(i) for i in range(len(self.cycles))]
        return data


class Table(object):
    weighted = False

    def __init__(self, columns, rows):
        self.columns = tuple(columns)
        self.rows = tuple(tuple(r) for r in rows)

    def __len__(self):
        return len(self.rows)

    @property
    def item_count(self):
        return len(self.rows)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_data(self):
        return {'columns': list(self.columns), 'rows': [[plain(v) for v in row] for row in self.rows]}


class FlowSummary(Table):
    COLUMNS = ('group', 'in_total', 'out_total', 'in_count', 'out_count', 'net')

    def __init__(self, rows):
        super().__init__(self.COLUMNS, rows)

    def row_for(self, group):
        for row in self.rows:
            if row[0] == group:
                return dict(zip(self.columns, row))
        return None


class Scalar(object):
    def __init__(self, value):
        self.value = value

    item_count = 1

    def to_data(self):
        return {'value': plain(self.value)}


def plain(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class EdgeTable(object):
    """
    Columnar edge records of one relation: source key, target key, weight.

    ``resolver`` maps user-facing node references (keys or labels) to keys.
    """

    columns = ('src', 'dst', 'weight')

    def __init__(self, sources, targets, weights=None, src_label=None, dst_label=None, relation=None,
                 resolver=None):
        self.sources = np.asarray(sources, dtype=object)
        self.targets = np.asarray(targets, dtype=object)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.src_label = src_label
        self.dst_label = dst_label
        self.relation = relation
        self.resolver = resolver
        if len(self.sources) != len(self.targets):
            raise ValueError('sources and targets differ in length')
        if self.weights is not None and len(self.weights) != len(self.sources):
            raise ValueError('weights must align with edges')

    def __len__(self):
        return len(self.sources)

    @property
    def item_count(self):
        return len(self.sources)

    @property
    def weighted(self):
        return self.weights is not None

    @property
    def rows(self):
        weights = self.weights if self.weights is not None else [None] * len(self.sources)
        return tuple(zip(self.sources.tolist(), self.targets.tolist(), list(weights)))

    def resolve(self, ref):
        return self.resolver(ref) if self.resolver is not None else ref

    def to_data(self):
        return {'columns': list(self.columns), 'rows': [[plain(v) for v in row] for row in self.rows]}
