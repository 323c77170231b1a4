"""
Task DAGs: stages bound to registry tools and the dependencies between them.

Dependencies are never stored twice; the DAG's edges are derived from the
bindings and gates of its nodes plus the report sink's inputs.
"""
import heapq

from analytics.exceptions import CyclicDag, PlanningFailed
from analytics.tools.distill import DistillDirective
from analytics.tools.kinds import CYCLE_SET, GRAPH, NODE_SCORES, NODE_SET, SCALAR, TABLE, kind_of

SOURCE_DATASET = 'SourceDataset'
STAGE_OUTPUT = 'StageOutput'
LITERAL = 'Literal'
BINDING_KINDS = (SOURCE_DATASET, STAGE_OUTPUT, LITERAL)

NODES = 'nodes'
VIEW = 'view'
EDGES = 'edges'
TOP1 = 'top1'
SELECTORS = (NODES, VIEW, EDGES, TOP1)

# (output kind, selector) → kind the consumer sees
SELECTOR_KINDS = {
    (CYCLE_SET, NODES): NODE_SET,
    (CYCLE_SET, VIEW): GRAPH,
    (CYCLE_SET, EDGES): TABLE,
    (NODE_SET, VIEW): GRAPH,
    (NODE_SET, EDGES): TABLE,
    (NODE_SCORES, TOP1): NODE_SET,
}
DATASET_SELECTOR_KINDS = {VIEW: GRAPH, EDGES: TABLE}

DATA = 'Data'
PARAMETER = 'Parameter'
DECISION = 'Decision'
DEP_KINDS = (DATA, PARAMETER, DECISION)

CONTAINS = 'contains'
COUNT_GT = 'count>'
COUNT_EQ = 'count=='
ABOVE_MEAN = 'above_mean'
GATE_TESTS = (CONTAINS, COUNT_GT, COUNT_EQ, ABOVE_MEAN)

RESET_PARAM = 'reset_param'
SET_PARAMS = 'set_params'
SUBSTITUTE_TOOL = 'substitute_tool'
INSERT_ADAPTER = 'insert_adapter'
REMOVE_ADAPTER = 'remove_adapter'
REFINE_ACTIONS = (RESET_PARAM, SET_PARAMS, SUBSTITUTE_TOOL, INSERT_ADAPTER, REMOVE_ADAPTER)

REPORT_ID = 'report'
REVISION_SEPARATOR = '~r'
DESCRIPTOR_MAX_LENGTH = 256
PLAN_VERSION = 1


class Intent(object):
    def __init__(self, raw_query, task_descriptors, dataset_refs=()):
        self.raw_query = raw_query
        self.task_descriptors = list(task_descriptors)
        self.dataset_refs = list(dataset_refs)

    def check(self):
        if not self.task_descriptors:
            raise PlanningFailed('the intent was decomposed into no stages')
        for descriptor in self.task_descriptors:
            if len(descriptor) > DESCRIPTOR_MAX_LENGTH:
                raise PlanningFailed('stage goal longer than %d chars: %r...'
                                     % (DESCRIPTOR_MAX_LENGTH, descriptor[:40]))
        return self

    def to_data(self):
        return {
            'raw_query': self.raw_query,
            'task_descriptors': self.task_descriptors,
            'dataset_refs': self.dataset_refs,
        }


class Binding(object):
    def __init__(self, kind, ref, selector=None):
        self.kind = kind
        self.ref = ref
        self.selector = selector

    @property
    def producer(self):
        return self.ref if self.kind == STAGE_OUTPUT else None

    @property
    def dep_kind(self):
        return PARAMETER if self.selector == TOP1 else DATA

    def rebind(self, producer):
        return Binding(self.kind, producer, self.selector)

    def kind_seen(self, producer_kind=None, slot_kind=None):
        """
        The value kind a consumer receives through this binding, or None if the
        selector does not apply.
        """
        if self.kind == SOURCE_DATASET:
            if self.selector is None:
                return slot_kind if slot_kind in (GRAPH, TABLE) else GRAPH
            return DATASET_SELECTOR_KINDS.get(self.selector)
        if self.kind == LITERAL:
            return literal_kind(self.ref)
        if self.selector is None:
            return producer_kind
        return SELECTOR_KINDS.get((producer_kind, self.selector))

    def __eq__(self, other):
        return isinstance(other, Binding) and self.to_data() == other.to_data()

    def __repr__(self):
        return '<Binding %s %r%s>' % (self.kind, self.ref, '.' + self.selector if self.selector else '')

    def to_data(self):
        return {'kind': self.kind, 'ref': self.ref, 'selector': self.selector}

    @classmethod
    def from_data(cls, data):
        return cls(data['kind'], data['ref'], data.get('selector'))


def literal_kind(value):
    from analytics.tools.codec import decode_value

    if isinstance(value, dict) and 'kind' in value:
        return kind_of(decode_value(value))
    if isinstance(value, (list, tuple)):
        return NODE_SET
    return SCALAR


def literal_value(value):
    from analytics.algorithms.results import NodeSet, Scalar
    from analytics.tools.codec import decode_value

    if isinstance(value, dict) and 'kind' in value:
        return decode_value(value)
    if isinstance(value, (list, tuple)):
        return NodeSet(value)
    return Scalar(value)


class Gate(object):
    """
    A Decision dependency: the node runs only if ``test`` holds on the producer's output.

    ``contains`` asks for membership, ``above_mean`` for a node whose score is
    above the mean score of a ``NodeScores`` output.
    """

    def __init__(self, producer, test, value):
        self.producer = producer
        self.test = test
        self.value = value

    def evaluate(self, payload, resolve=None):
        if self.test == COUNT_GT:
            return payload.item_count > self.value
        if self.test == COUNT_EQ:
            return payload.item_count == self.value
        target = self.value
        if resolve is not None:
            try:
                target = resolve(target)
            except Exception:
                return False
        if self.test == ABOVE_MEAN:
            return _above_mean(payload, target)
        return str(target) in {str(key) for key in _members(payload)}

    def describe(self):
        return '%s %s %s' % (self.producer, self.test, self.value)

    def rebind(self, producer):
        return Gate(producer, self.test, self.value)

    def to_data(self):
        return {'producer': self.producer, 'test': self.test, 'value': self.value}

    @classmethod
    def from_data(cls, data):
        return cls(data['producer'], data['test'], data['value'])


def _above_mean(payload, target):
    if not hasattr(payload, 'score_of') or getattr(payload, 'labeling', False) or not len(payload):
        return False
    for key, score in payload.items():
        if str(key) == str(target):
            return score > float(payload.values.mean())
    return False


def _members(payload):
    if hasattr(payload, 'node_union'):
        return payload.node_union()
    if hasattr(payload, 'keys') and not callable(payload.keys):
        return payload.keys
    if hasattr(payload, 'nodes'):
        return payload.nodes
    if hasattr(payload, 'rows'):
        return [row[0] for row in payload.rows]
    return ()


class TaskNode(object):
    def __init__(self, id, goal, tool_name, params=None, input_bindings=None, output_name=None, family=None,
                 algorithm=None, directive=None, gate=None, adapter=False):
        self.id = id
        self.goal = goal
        self.tool_name = tool_name
        self.params = dict(params or {})
        self.input_bindings = dict(input_bindings or {})
        self.output_name = output_name or id
        self.family = family
        self.algorithm = algorithm
        self.directive = directive
        self.gate = gate
        self.adapter = adapter

    @property
    def base_id(self):
        return self.id.split(REVISION_SEPARATOR)[0]

    def revised(self, round, **changes):
        data = dict(self.__dict__)
        data.update(changes)
        data['id'] = '%s%s%d' % (self.base_id, REVISION_SEPARATOR, round)
        data['output_name'] = self.output_name
        return TaskNode(**data)

    def replace(self, **changes):
        data = dict(self.__dict__)
        data.update(changes)
        return TaskNode(**data)

    def dependencies(self):
        """
        ``(producer, dep_kind)`` pairs, bindings first, in slot order.
        """
        deps = []
        for slot in sorted(self.input_bindings):
            binding = self.input_bindings[slot]
            if binding.producer is not None:
                deps.append((binding.producer, binding.dep_kind))
        if self.gate is not None:
            deps.append((self.gate.producer, DECISION))
        return deps

    def to_data(self):
        return {
            'id': self.id,
            'goal': self.goal,
            'tool': self.tool_name,
            'params': self.params,
            'bindings': {slot: b.to_data() for slot, b in sorted(self.input_bindings.items())},
            'output_name': self.output_name,
            'family': self.family,
            'algorithm': self.algorithm,
            'directive': self.directive.to_data() if self.directive is not None else None,
            'gate': self.gate.to_data() if self.gate is not None else None,
            'adapter': self.adapter,
        }

    @classmethod
    def from_data(cls, data):
        return cls(
            data['id'], data.get('goal', ''), data['tool'], data.get('params'),
            {slot: Binding.from_data(b) for slot, b in data.get('bindings', {}).items()},
            data.get('output_name'), data.get('family'), data.get('algorithm'),
            DistillDirective(**data['directive']) if data.get('directive') else None,
            Gate.from_data(data['gate']) if data.get('gate') else None,
            data.get('adapter', False),
        )

    def __repr__(self):
        return '<TaskNode %s %s>' % (self.id, self.tool_name)


class ReportSink(object):
    """
    The terminal node: it consumes every sink stage and runs no tool.
    """

    id = REPORT_ID

    def __init__(self, inputs):
        self.inputs = sorted(inputs)

    def to_data(self):
        return {'id': self.id, 'inputs': self.inputs}


class TaskDag(object):
    """
    ``datasets`` maps the source relation labels a plan may bind to their
    ``{'directed', 'weighted'}`` flags; the first one is the primary relation that
    stage views are cut from.
    """

    def __init__(self, nodes, datasets=None, sink=None, primary=None):
        self.nodes = list(nodes)
        self.datasets = dict(datasets or {})
        self.primary = primary if primary is not None else next(iter(sorted(self.datasets)), None)
        self._index = {node.id: node for node in self.nodes}
        self.sink = sink if sink is not None else ReportSink(self.sink_ids())

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node_id):
        return node_id in self._index

    def node(self, node_id):
        return self._index[node_id]

    def node_ids(self):
        return [node.id for node in self.nodes]

    @property
    def edges(self):
        edges = set()
        for node in self.nodes:
            for producer, dep_kind in node.dependencies():
                edges.add((producer, node.id, dep_kind))
        if self.sink is not None:
            for producer in self.sink.inputs:
                edges.add((producer, self.sink.id, DATA))
        return sorted(edges)

    def consumers_of(self, node_id):
        return sorted({node.id for node in self.nodes if node_id in {p for p, _ in node.dependencies()}})

    def sink_ids(self):
        produced = {p for node in self.nodes for p, _ in node.dependencies()}
        return sorted(node.id for node in self.nodes if node.id not in produced)

    def with_nodes(self, nodes):
        """
        A new DAG over ``nodes`` with the same datasets and a recomputed sink.
        """
        return TaskDag(nodes, self.datasets, primary=self.primary)

    def to_data(self):
        return {
            'version': PLAN_VERSION,
            'datasets': self.datasets,
            'primary': self.primary,
            'nodes': [node.to_data() for node in self.nodes],
            'edges': [list(edge) for edge in self.edges],
            'report': self.sink.to_data() if self.sink is not None else None,
        }

    @classmethod
    def from_data(cls, data):
        nodes = [TaskNode.from_data(n) for n in data['nodes']]
        sink = ReportSink(data['report']['inputs']) if data.get('report') else None
        return cls(nodes, data.get('datasets'), sink=sink, primary=data.get('primary'))


def topological_order(dag):
    """
    Kahn's algorithm with the ready set ordered by node id. The report sink always
    comes last and is left out.
    """
    ids = dag.node_ids()
    known = set(ids)
    indegree = {node_id: 0 for node_id in ids}
    consumers = {node_id: [] for node_id in ids}
    for producer, consumer, _ in dag.edges:
        if producer in known and consumer in known:
            indegree[consumer] += 1
            consumers[producer].append(consumer)

    ready = [node_id for node_id in ids if indegree[node_id] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        node_id = heapq.heappop(ready)
        order.append(node_id)
        for consumer in consumers[node_id]:
            indegree[consumer] -= 1
            if indegree[consumer] == 0:
                heapq.heappush(ready, consumer)
    if len(order) != len(ids):
        remaining = sorted(node_id for node_id in ids if indegree[node_id] > 0)
        raise CyclicDag('task DAG has a cycle through %s' % ', '.join(remaining), nodes=remaining)
    return order
