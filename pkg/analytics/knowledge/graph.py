"""
The hierarchical knowledge base.

Knowledge lives in a three-level forest: categories contain families, families
contain algorithms. Readers work against an immutable ``KnowledgeSnapshot``;
feedback and inserts build a new snapshot under the writer lock and publish it
in one assignment.
"""
import logging
import math
import os
import threading

from django.conf import settings

from analytics.exceptions import DuplicateId, EmptyKnowledgeBase, HierarchyError, LevelError, ParseError, UnknownNode

from .scoring import BM25Scorer, tokenize

logger = logging.getLogger(__name__)

CATEGORY = 'Category'
FAMILY = 'Family'
ALGORITHM = 'Algorithm'
LEVELS = (CATEGORY, FAMILY, ALGORITHM)

CONTAINS = 'Contains'
VARIANT_OF = 'VariantOf'
REFINES = 'Refines'
RELATIONS = (CONTAINS, VARIANT_OF, REFINES)

USEFUL = 'Useful'
NOT_USEFUL = 'NotUseful'
SIGNALS = (USEFUL, NOT_USEFUL)

SUMMARY_MAX_LENGTH = 512

DEFAULT_USEFULNESS = {'alpha': 1.25, 'beta': 0.8, 'u_min': 0.05, 'u_max': 10.0}


def usefulness_settings():
    return dict(DEFAULT_USEFULNESS, **getattr(settings, 'AAG_USEFULNESS', {}))


class KnowledgeNode(object):
    def __init__(self, id, level, name, summary='', attributes=None, detail_ref=None, usefulness=1.0):
        self.id = id
        self.level = level
        self.name = name
        self.summary = summary
        self.attributes = dict(attributes or {})
        self.detail_ref = detail_ref
        self.usefulness = usefulness

    def replace(self, **changes):
        data = self.to_data()
        data['detail_ref'] = data.pop('detail_path')
        data.update(changes)
        return KnowledgeNode(**data)

    @property
    def tool(self):
        return self.attributes.get('tool')

    def to_data(self):
        return {
            'id': self.id,
            'level': self.level,
            'name': self.name,
            'summary': self.summary,
            'attributes': dict(sorted(self.attributes.items())),
            'detail_path': self.detail_ref,
            'usefulness': self.usefulness,
        }

    def __repr__(self):
        return '<KnowledgeNode %s %s>' % (self.level, self.id)


class KnowledgeEdge(object):
    def __init__(self, src, dst, relation):
        self.src = src
        self.dst = dst
        self.relation = relation

    def key(self):
        return (self.src, self.dst, self.relation)

    def to_data(self):
        return {'src': self.src, 'dst': self.dst, 'relation': self.relation}


class Candidate(object):
    def __init__(self, node_id, score, trail):
        self.node_id = node_id
        self.score = score
        self.trail = list(trail)

    def to_data(self):
        return {'id': self.node_id, 'score': self.score, 'trail': self.trail}


class RetrievalResult(object):
    def __init__(self, candidates, accessed_details, families=()):
        self.candidates = list(candidates)
        self.accessed_details = list(accessed_details)
        self.families = list(families)

    @property
    def ids(self):
        return [c.node_id for c in self.candidates]

    def to_data(self):
        return {
            'candidates': [c.to_data() for c in self.candidates],
            'accessed_details': self.accessed_details,
            'families': self.families,
        }


def _level_index(level):
    return LEVELS.index(level)


def _algorithm_document(node):
    tokens = tokenize(node.name) + tokenize(node.summary)
    for key, value in sorted(node.attributes.items()):
        tokens.extend(tokenize(str(key)))
        tokens.extend(tokenize(str(value)))
    return tokens


class KnowledgeSnapshot(object):
    """
    One immutable, invariant-checked state of the knowledge base.
    """

    def __init__(self, nodes=(), edges=(), base_dir=''):
        self.nodes = {node.id: node for node in nodes}
        self.edges = tuple(sorted(edges, key=KnowledgeEdge.key))
        self.base_dir = base_dir
        self.parents = {}
        self.children = {}
        for edge in self.edges:
            if edge.relation == CONTAINS:
                self.parents.setdefault(edge.dst, []).append(edge.src)
                self.children.setdefault(edge.src, []).append(edge.dst)
        self.check()
        self._scorers = None

    def __len__(self):
        return len(self.nodes)

    def check(self):
        u_max = usefulness_settings()['u_max']
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            if node.level not in LEVELS:
                raise HierarchyError('node %r has unknown level %r' % (node_id, node.level), node_id=node_id)
            if node.level == ALGORITHM and not node.detail_ref:
                raise HierarchyError('algorithm %r has no detail document' % node_id, node_id=node_id)
            if node.level == CATEGORY and node.detail_ref:
                raise HierarchyError('category %r must not carry a detail document' % node_id, node_id=node_id)
            if not 0 < node.usefulness <= u_max:
                raise HierarchyError('usefulness of %r outside (0, %s]' % (node_id, u_max), node_id=node_id)
            parents = self.parents.get(node_id, [])
            if node.level == CATEGORY and parents:
                raise HierarchyError('category %r has a parent' % node_id, node_id=node_id)
            if node.level != CATEGORY and not parents:
                raise HierarchyError('%s %r has no parent' % (node.level.lower(), node_id), node_id=node_id)
            if len(parents) > 1:
                raise HierarchyError('%r has %d parents' % (node_id, len(parents)), node_id=node_id)
        for edge in self.edges:
            for end in (edge.src, edge.dst):
                if end not in self.nodes:
                    raise HierarchyError('edge %s→%s names unknown node %r' % (edge.src, edge.dst, end), node_id=end)
            src, dst = self.nodes[edge.src], self.nodes[edge.dst]
            if edge.relation == CONTAINS and _level_index(dst.level) != _level_index(src.level) + 1:
                raise HierarchyError('%s %r cannot contain %s %r' % (src.level, src.id, dst.level, dst.id),
                                     node_id=dst.id)
            if edge.relation != CONTAINS and src.level != dst.level:
                raise HierarchyError('%s edge %s→%s crosses levels' % (edge.relation, src.id, dst.id),
                                     node_id=dst.id)

    def node(self, node_id):
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id)

    def parent(self, node_id):
        parents = self.parents.get(node_id)
        return parents[0] if parents else None

    def children_of(self, node_id):
        return sorted(self.children.get(node_id, []))

    def trail(self, node_id):
        trail = []
        parent = self.parent(node_id)
        while parent is not None:
            trail.insert(0, parent)
            parent = self.parent(parent)
        return trail

    def family_of(self, algorithm_id):
        return self.parent(algorithm_id)

    def related(self, node_id, relation):
        """
        Ids linked to ``node_id`` by ``relation`` in either direction, sorted.
        """
        linked = set()
        for edge in self.edges:
            if edge.relation != relation:
                continue
            if edge.src == node_id:
                linked.add(edge.dst)
            elif edge.dst == node_id:
                linked.add(edge.src)
        return sorted(linked)

    def by_level(self, level):
        return [self.nodes[i] for i in sorted(self.nodes) if self.nodes[i].level == level]

    def algorithms_for_tool(self, tool_name):
        return [n.id for n in self.by_level(ALGORITHM) if n.tool == tool_name]

    @property
    def scorers(self):
        # built on first use only; a snapshot never changes afterwards
        if self._scorers is None:
            families = self.by_level(FAMILY)
            algorithms = self.by_level(ALGORITHM)
            self._scorers = (
                [f.id for f in families], BM25Scorer([tokenize(f.summary) for f in families]),
                {a.id: i for i, a in enumerate(algorithms)}, BM25Scorer([_algorithm_document(a) for a in algorithms]),
            )
        return self._scorers

    def detail_path(self, node):
        if os.path.isabs(node.detail_ref):
            return node.detail_ref
        return os.path.join(self.base_dir, node.detail_ref)

    def to_data(self):
        return {
            'nodes': [self.nodes[i].to_data() for i in sorted(self.nodes)],
            'edges': [e.to_data() for e in self.edges],
        }


class KnowledgeGraph(object):
    """
    The mutable handle the engine holds: a current snapshot plus the access log.
    """

    def __init__(self, snapshot=None):
        self._snapshot = snapshot if snapshot is not None else KnowledgeSnapshot()
        self._write_lock = threading.Lock()
        self._log_lock = threading.Lock()
        self.access_log = []

    def __len__(self):
        return len(self._snapshot)

    def snapshot(self):
        return self._snapshot

    @property
    def base_dir(self):
        return self._snapshot.base_dir

    def node(self, node_id):
        return self._snapshot.node(node_id)

    ############
    # Reading #
    ############

    def retrieve(self, query, k):
        """
        Coarse-to-fine retrieval of the ``k`` best algorithms for ``query``.

        Families are ranked first; only the children of the top ``ceil(k / 2)``
        families are rescored and only the final top ``k`` details are loaded.
        """
        if k < 1:
            raise ValueError('k must be at least 1')
        snapshot = self._snapshot
        if not len(snapshot):
            raise EmptyKnowledgeBase('the knowledge base is empty')
        tokens = tokenize(query)
        family_ids, family_scorer, algorithm_index, algorithm_scorer = snapshot.scorers

        family_scores = {}
        for family_id, lexical in zip(family_ids, family_scorer.scores(tokens)):
            family_scores[family_id] = (1.0 + lexical) * snapshot.nodes[family_id].usefulness
        ranked_families = sorted(family_scores, key=lambda i: (-family_scores[i], i))
        selected = ranked_families[:int(math.ceil(k / 2.0))]

        lexical = algorithm_scorer.scores(tokens)
        scored = []
        for family_id in selected:
            for child_id in snapshot.children_of(family_id):
                child = snapshot.nodes[child_id]
                if child.level != ALGORITHM:
                    continue
                score = family_scores[family_id] * (1.0 + lexical[algorithm_index[child_id]]) * child.usefulness
                scored.append(Candidate(child_id, score, snapshot.trail(child_id)))
        scored.sort(key=lambda c: (-c.score, c.node_id))
        candidates = scored[:k]

        accessed = []
        for candidate in candidates:
            self._load_detail(snapshot, snapshot.nodes[candidate.node_id])
            accessed.append(candidate.node_id)
        logger.debug('retrieved %s for %r (families %s)', [c.node_id for c in candidates], query, selected)
        return RetrievalResult(candidates, accessed, selected)

    def _load_detail(self, snapshot, node):
        path = snapshot.detail_path(node)
        try:
            with open(path, encoding='utf-8') as f:
                document = f.read()
        except OSError as e:
            raise ParseError('cannot read detail document of %r: %s' % (node.id, e))
        with self._log_lock:
            self.access_log.append(node.id)
        return document

    def fetch_detail(self, algorithm_id):
        snapshot = self._snapshot
        node = snapshot.node(algorithm_id)
        if node.level != ALGORITHM:
            raise LevelError('%r is a %s, details exist for algorithms only' % (algorithm_id, node.level))
        return {
            'id': node.id,
            'name': node.name,
            'document': self._load_detail(snapshot, node),
            'attributes': dict(sorted(node.attributes.items())),
        }

    ############
    # Writing #
    ############

    def record_feedback(self, node_id, signal):
        """
        Scale a node's usefulness up or down; returns the new value.

        Feedback applies to the node alone and never propagates to ancestors.
        """
        if signal not in SIGNALS:
            raise ValueError('signal must be one of %s' % ', '.join(SIGNALS))
        constants = usefulness_settings()
        with self._write_lock:
            snapshot = self._snapshot
            node = snapshot.node(node_id)
            factor = constants['alpha'] if signal == USEFUL else constants['beta']
            value = min(max(node.usefulness * factor, constants['u_min']), constants['u_max'])
            nodes = dict(snapshot.nodes)
            nodes[node_id] = node.replace(usefulness=value)
            self._snapshot = KnowledgeSnapshot(nodes.values(), snapshot.edges, snapshot.base_dir)
        logger.info('usefulness of %s: %.4g → %.4g (%s)', node_id, node.usefulness, value, signal)
        return value

    def insert(self, node, parent_id=None):
        """
        Add ``node`` under ``parent_id`` (categories take no parent).
        """
        with self._write_lock:
            snapshot = self._snapshot
            if node.id in snapshot.nodes:
                raise DuplicateId('knowledge node %r already exists' % node.id)
            if node.level not in LEVELS:
                raise LevelError('unknown level %r' % (node.level,))
            edges = list(snapshot.edges)
            if node.level == CATEGORY:
                if parent_id is not None:
                    raise LevelError('categories are roots and take no parent')
            else:
                parent = snapshot.node(parent_id)
                if _level_index(parent.level) + 1 != _level_index(node.level):
                    raise LevelError('a %s cannot be placed under %s %r' % (node.level, parent.level, parent_id))
                edges.append(KnowledgeEdge(parent_id, node.id, CONTAINS))
            self._snapshot = KnowledgeSnapshot(list(snapshot.nodes.values()) + [node], edges, snapshot.base_dir)
        logger.info('inserted %s %s under %s', node.level, node.id, parent_id)
        return self
