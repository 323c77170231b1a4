"""
Static validation of task DAGs against the tool registry.

Violations are data: ``validate_dag`` collects every problem it finds instead of
stopping at the first. Parameter and slot checks are the same ones the registry
runs on invocation.
"""
from collections import defaultdict

from analytics.algorithms.components import STRONG, connected_components
from analytics.construction.csr import CsrGraph
from analytics.exceptions import AnalyticsError
from analytics.tools.descriptors import DIRECTED, WEIGHTED
from analytics.tools.distill import COMPATIBLE_KINDS
from analytics.tools.kinds import GRAPH, NODE_SCORES, TABLE

from .dag import ABOVE_MEAN, COUNT_EQ, COUNT_GT, LITERAL, SOURCE_DATASET, STAGE_OUTPUT, literal_value

CYCLE_VIOLATION = 'CycleViolation'
UNKNOWN_TOOL = 'UnknownTool'
UNRESOLVED_BINDING = 'UnresolvedBinding'
SCHEMA_VIOLATION = 'SchemaViolation'
KIND_MISMATCH = 'KindMismatch'
CONSTRAINT_VIOLATION = 'ConstraintViolation'
GATE_VIOLATION = 'GateViolation'
MODE_MISMATCH = 'ModeMismatch'
REPORT_VIOLATION = 'ReportViolation'


class Violation(object):
    def __init__(self, code, message, node=None, **details):
        self.code = code
        self.message = message
        self.node = node
        self.details = details

    def sort_key(self):
        return (self.node or '', self.code, self.message)

    def to_data(self):
        data = {'code': self.code, 'message': self.message, 'node': self.node}
        if self.details:
            data['details'] = self.details
        return data

    def __repr__(self):
        return '<Violation %s %s: %s>' % (self.code, self.node, self.message)


def _cycle_violations(dag):
    ids = dag.node_ids()
    index = {node_id: i for i, node_id in enumerate(ids)}
    sources, targets = [], []
    self_loops = []
    for producer, consumer, _ in dag.edges:
        if producer in index and consumer in index:
            if producer == consumer:
                self_loops.append(producer)
            sources.append(index[producer])
            targets.append(index[consumer])
    if not ids:
        return []
    graph = CsrGraph.from_edges(len(ids), sources, targets, keys=ids)
    labels = connected_components(graph, STRONG)
    members = defaultdict(list)
    for key, label in labels.items():
        members[label].append(key)
    violations = []
    for component in members.values():
        if len(component) > 1 or component[0] in self_loops:
            nodes = sorted(component)
            violations.append(Violation(CYCLE_VIOLATION, 'dependency cycle through %s' % ', '.join(nodes),
                                        nodes[0], nodes=nodes))
    return violations


def _binding_kind(dag, registry, node, slot, binding, slot_kind, violations):
    """
    The kind ``binding`` delivers to ``slot``, or None if it cannot be resolved.
    """
    if binding.kind == SOURCE_DATASET:
        if binding.ref not in dag.datasets:
            violations.append(Violation(UNRESOLVED_BINDING, 'input %r names unknown dataset %r' % (slot, binding.ref),
                                        node.id, slot=slot))
            return None
        return binding.kind_seen(slot_kind=slot_kind)
    if binding.kind == LITERAL:
        try:
            return binding.kind_seen()
        except AnalyticsError as e:
            violations.append(Violation(SCHEMA_VIOLATION, 'input %r: %s' % (slot, e.message), node.id, slot=slot))
            return None
    if binding.ref not in dag:
        violations.append(Violation(UNRESOLVED_BINDING, 'input %r names unknown stage %r' % (slot, binding.ref),
                                    node.id, slot=slot))
        return None
    producer = dag.node(binding.ref)
    if producer.tool_name not in registry:
        return None
    produced = registry.descriptor(producer.tool_name).output_kind
    kind = binding.kind_seen(producer_kind=produced)
    if kind is None:
        violations.append(Violation(
            KIND_MISMATCH, 'selector %r does not apply to %s output of %s' % (binding.selector, produced, producer.id),
            node.id, slot=slot, expected=slot_kind, given=produced,
        ))
    return kind


def _binding_flags(dag, binding):
    """
    ``{'directed', 'weighted'}`` of the relation a graph or table binding comes from.
    """
    if binding.kind == SOURCE_DATASET:
        return dag.datasets.get(binding.ref)
    if binding.kind == STAGE_OUTPUT and binding.selector is not None:
        return dag.datasets.get(dag.primary)
    if binding.kind == LITERAL:
        value = literal_value(binding.ref)
        return {'directed': getattr(value, 'directed', True), 'weighted': getattr(value, 'weighted', False)}
    return None


def _gate_violations(dag, registry, node):
    gate = node.gate
    if gate.producer not in dag:
        return [Violation(UNRESOLVED_BINDING, 'gate names unknown stage %r' % (gate.producer,), node.id)]
    if gate.test in (COUNT_GT, COUNT_EQ) and (isinstance(gate.value, bool) or not isinstance(gate.value, int)):
        return [Violation(GATE_VIOLATION, 'gate %s needs an integer, got %r' % (gate.test, gate.value), node.id)]
    producer = dag.node(gate.producer)
    if gate.test == ABOVE_MEAN and producer.tool_name in registry:
        produced = registry.descriptor(producer.tool_name).output_kind
        if produced != NODE_SCORES:
            return [Violation(GATE_VIOLATION, 'gate %s needs NodeScores, %s gives %s'
                              % (gate.test, producer.id, produced), node.id)]
    return []


def _node_violations(dag, registry, node):
    violations = []
    if node.tool_name not in registry:
        violations.append(Violation(UNKNOWN_TOOL, 'tool %r is not registered' % (node.tool_name,), node.id,
                                    tool=node.tool_name))
        return violations
    descriptor = registry.descriptor(node.tool_name)

    for error in descriptor.param_violations(node.params):
        violations.append(Violation(SCHEMA_VIOLATION, error.message, node.id, field=error.field))

    slot_kinds = {}
    for slot in sorted(node.input_bindings):
        binding = node.input_bindings[slot]
        expected = descriptor.slot(slot).kind if descriptor.slot(slot) is not None else None
        kind = _binding_kind(dag, registry, node, slot, binding, expected, violations)
        if kind is not None:
            slot_kinds[slot] = kind
    unresolved = set(node.input_bindings) - set(slot_kinds)
    for error in descriptor.slot_violations(slot_kinds):
        if error.field in unresolved:
            continue
        expected, given = error.details.get('expected'), error.details.get('given')
        code = KIND_MISMATCH if expected is not None and given is not None else SCHEMA_VIOLATION
        violations.append(Violation(code, error.message, node.id, slot=error.field, expected=expected, given=given))

    for slot in descriptor.inputs:
        binding = node.input_bindings.get(slot.name)
        if binding is None or slot_kinds.get(slot.name) not in (GRAPH, TABLE):
            continue
        flags = _binding_flags(dag, binding)
        if flags is None:
            continue
        if DIRECTED in slot.constraints and not flags.get('directed', True):
            violations.append(Violation(CONSTRAINT_VIOLATION, '%s requires a directed graph on %r'
                                        % (node.tool_name, slot.name), node.id, slot=slot.name))
        if WEIGHTED in slot.constraints and not flags.get('weighted', False):
            violations.append(Violation(CONSTRAINT_VIOLATION, '%s requires a weighted input on %r'
                                        % (node.tool_name, slot.name), node.id, slot=slot.name))

    if node.gate is not None:
        violations.extend(_gate_violations(dag, registry, node))

    if node.directive is not None and descriptor.output_kind not in COMPATIBLE_KINDS[node.directive.mode]:
        violations.append(Violation(MODE_MISMATCH, '%s cannot distill %s output' % (node.directive.mode,
                                                                                   descriptor.output_kind), node.id))
    return violations


def validate_dag(dag, registry):
    """
    Every violation of ``dag`` against ``registry``, sorted by node id; an empty
    list means the DAG is valid.
    """
    violations = []
    seen = set()
    for node in dag.nodes:
        if node.id in seen:
            violations.append(Violation(SCHEMA_VIOLATION, 'duplicate node id', node.id))
        seen.add(node.id)
        violations.extend(_node_violations(dag, registry, node))
    violations.extend(_cycle_violations(dag))

    if dag.sink is None:
        violations.append(Violation(REPORT_VIOLATION, 'the DAG has no report node'))
    else:
        for producer in dag.sink.inputs:
            if producer not in dag:
                violations.append(Violation(REPORT_VIOLATION, 'report consumes unknown stage %r' % (producer,)))
        if not dag.sink.inputs and len(dag):
            violations.append(Violation(REPORT_VIOLATION, 'the report consumes no stage'))
    return sorted(violations, key=Violation.sort_key)
