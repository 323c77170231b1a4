"""
Plan refinement from execution feedback.

Only flagged nodes change. A changed node gets the revision id ``<id>~r<round>``;
bindings and gates naming it are rewritten, every other node keeps its id so its
stored output stays valid.
"""
import logging

from django.conf import settings

from analytics.coordinator import REFINE, CoordinatorRequest
from analytics.exceptions import ExecutorError, PlanningFailed, RefinementExhausted, SchemaValidationFailed
from analytics.knowledge.graph import VARIANT_OF

from .dag import (
    INSERT_ADAPTER, REMOVE_ADAPTER, RESET_PARAM, SET_PARAMS, STAGE_OUTPUT, SUBSTITUTE_TOOL, TOP1, Binding, TaskNode
)
from .validation import validate_dag

logger = logging.getLogger(__name__)

ERROR = 'Error'
LOW_QUALITY = 'LowQuality'
OK = 'Ok'
OUTCOMES = (ERROR, LOW_QUALITY, OK)

DEFAULT_R_MAX = 3
ADAPTER_TOOL = 'top_k'


def r_max_setting():
    return getattr(settings, 'AAG_R_MAX', DEFAULT_R_MAX)


class ExecutionFeedback(object):
    def __init__(self, node_id, outcome, detail=None):
        if outcome not in OUTCOMES:
            raise ValueError('unknown outcome %r' % (outcome,))
        detail = dict(detail or {})
        if outcome == LOW_QUALITY and not detail.get('metrics'):
            raise ValueError('LowQuality feedback must name at least one metric')
        self.node_id = node_id
        self.outcome = outcome
        self.detail = detail

    @property
    def flagged(self):
        return self.outcome != OK

    @classmethod
    def from_error(cls, node_id, error):
        cause = error.cause if isinstance(error, ExecutorError) else error
        detail = {'error': cause.__class__.__name__, 'message': str(cause)}
        param = getattr(cause, 'param', None) or getattr(cause, 'field', None)
        if param:
            detail['param'] = param
        return cls(node_id, ERROR, detail)

    @classmethod
    def low_quality(cls, node_id, **metrics):
        return cls(node_id, LOW_QUALITY, {'metrics': metrics})

    def as_dict(self):
        return {'node_id': self.node_id, 'outcome': self.outcome, 'detail': self.detail}

    def __repr__(self):
        return '<ExecutionFeedback %s %s>' % (self.node_id, self.outcome)


def variant_tools(node, kg, registry):
    """
    Registered tools of the VariantOf relatives of the node's algorithm that can
    take over its current bindings.
    """
    if kg is None or not len(kg):
        return []
    snapshot = kg.snapshot()
    algorithms = [node.algorithm] if node.algorithm in snapshot.nodes else snapshot.algorithms_for_tool(node.tool_name)
    tools = []
    for algorithm in algorithms:
        for related in snapshot.related(algorithm, VARIANT_OF):
            tool = snapshot.node(related).tool
            if not tool or tool == node.tool_name or tool not in registry or tool in tools:
                continue
            required = {slot.name for slot in registry.descriptor(tool).inputs if slot.required}
            if required <= set(node.input_bindings):
                tools.append(tool)
    return sorted(tools)


def _node_context(dag, node, kg, registry):
    descriptor = registry.descriptor(node.tool_name) if node.tool_name in registry else None
    return {
        'id': node.id,
        'goal': node.goal,
        'tool': node.tool_name,
        'family': node.family,
        'params': node.params,
        'defaults': descriptor.defaults() if descriptor else {},
        'bindings': {slot: b.to_data() for slot, b in sorted(node.input_bindings.items())},
        'adapter': node.adapter,
        'revision': node.id != node.base_id,
        'variants': variant_tools(node, kg, registry),
    }


class _Revision(object):
    """
    Accumulates node rewrites for one refinement round.
    """

    def __init__(self, dag, round):
        self.round = round
        self.nodes = {node.id: node for node in dag.nodes}
        self.order = dag.node_ids()
        self.renamed = {}

    def revise(self, node_id, **changes):
        node = self.nodes.pop(node_id)
        revised = node.revised(self.round, **changes)
        self.nodes[revised.id] = revised
        self.order[self.order.index(node_id)] = revised.id
        self.renamed[node_id] = revised.id
        return revised

    def add(self, node, before):
        self.nodes[node.id] = node
        self.order.insert(self.order.index(before), node.id)

    def remove(self, node_id):
        del self.nodes[node_id]
        self.order.remove(node_id)

    def current(self, node_id):
        return self.nodes[self.renamed.get(node_id, node_id)]

    def finish(self):
        result = []
        for node_id in self.order:
            node = self.nodes[node_id]
            bindings = {
                slot: b.rebind(self.renamed[b.producer]) if b.producer in self.renamed else b
                for slot, b in node.input_bindings.items()
            }
            gate = node.gate
            if gate is not None and gate.producer in self.renamed:
                gate = gate.rebind(self.renamed[gate.producer])
            result.append(node.replace(input_bindings=bindings, gate=gate))
        return result


def _apply(revision, action, dag, kg, registry, flagged):
    node_id = action['node']
    if node_id not in flagged:
        raise PlanningFailed('refinement may only change flagged nodes, not %r' % (node_id,))
    node = revision.current(node_id)
    descriptor = registry.descriptor(node.tool_name)

    if action['action'] == RESET_PARAM:
        params = dict(node.params)
        if action['param'] is None:
            params = {}
        elif descriptor.param(action['param']) is None:
            raise PlanningFailed('%s has no parameter %r to reset' % (node.tool_name, action['param']))
        elif descriptor.param(action['param']).default is None:
            params.pop(action['param'], None)
        else:
            params[action['param']] = descriptor.param(action['param']).default
        revision.revise(node.id, params=params)

    elif action['action'] == SET_PARAMS:
        revision.revise(node.id, params=dict(node.params, **action['params']))

    elif action['action'] == SUBSTITUTE_TOOL:
        tool = action['tool']
        if tool not in variant_tools(node, kg, registry):
            raise PlanningFailed('%r is not a registered variant of %s' % (tool, node.tool_name))
        replacement = registry.descriptor(tool)
        params = {name: value for name, value in node.params.items() if replacement.param(name) is not None}
        snapshot = kg.snapshot()
        algorithms = [a for a in snapshot.algorithms_for_tool(tool) if snapshot.family_of(a) == node.family]
        algorithm = algorithms[0] if algorithms else None
        revision.revise(node.id, tool_name=tool, params=params, algorithm=algorithm)

    elif action['action'] == INSERT_ADAPTER:
        slot = action['slot']
        binding = node.input_bindings.get(slot)
        if binding is None or binding.kind != STAGE_OUTPUT:
            raise PlanningFailed('%s has no stage input %r to adapt' % (node.id, slot))
        adapter = TaskNode(
            '%s_%s_top_k' % (node.base_id, slot),
            'keep the %d best scored nodes for %s' % (action['k'], node.base_id),
            ADAPTER_TOOL, {'k': action['k']}, {'scores': Binding(STAGE_OUTPUT, binding.producer)},
            family=registry.descriptor(ADAPTER_TOOL).family, adapter=True,
        )
        revision.add(adapter, before=node.id)
        bindings = dict(node.input_bindings, **{slot: Binding(STAGE_OUTPUT, adapter.id)})
        revision.revise(node.id, input_bindings=bindings)

    elif action['action'] == REMOVE_ADAPTER:
        if not node.adapter:
            raise PlanningFailed('%s is not an adapter node' % (node.id,))
        source = node.input_bindings['scores'].producer
        for consumer_id in dag.consumers_of(node.id):
            consumer = revision.current(consumer_id)
            bindings = {
                slot: Binding(STAGE_OUTPUT, source, TOP1) if b.producer == node.id else b
                for slot, b in consumer.input_bindings.items()
            }
            if consumer.id in flagged:
                revision.revise(consumer.id, input_bindings=bindings)
            else:
                revision.nodes[consumer.id] = consumer.replace(input_bindings=bindings)
        revision.remove(node.id)


def apply_actions(dag, actions, kg, registry, round, flagged):
    revision = _Revision(dag, round)
    for action in actions:
        _apply(revision, action, dag, kg, registry, flagged)
    return dag.with_nodes(revision.finish())


def refine(dag, feedback, kg, registry, coordinator, round, r_max=None):
    """
    Revise ``dag`` for the flagged entries of ``feedback``; ``round`` counts the
    refinements already made for this run.
    """
    r_max = r_max_setting() if r_max is None else r_max
    flagged = [f for f in feedback if f.flagged]
    if round >= r_max:
        raise RefinementExhausted('refinement round %d exceeds the limit of %d' % (round + 1, r_max), flagged)
    if not flagged:
        return dag

    payload = {
        'round': round + 1,
        'feedback': [f.as_dict() for f in flagged],
        'nodes': [_node_context(dag, dag.node(f.node_id), kg, registry) for f in flagged if f.node_id in dag],
    }
    try:
        response = coordinator.complete(CoordinatorRequest(REFINE, payload))
    except SchemaValidationFailed as e:
        raise PlanningFailed('refinement response rejected: %s' % e.message, attempts=len(e.transcripts)) from e
    actions = response.value['actions']
    if not actions:
        logger.info('refinement round %d: no changes proposed', round + 1)
        return dag

    revised = apply_actions(dag, actions, kg, registry, round + 1, {f.node_id for f in flagged})
    violations = validate_dag(revised, registry)
    if violations:
        raise PlanningFailed('refined plan does not validate', violations=[v.to_data() for v in violations])
    logger.info('refinement round %d: %s', round + 1, ', '.join('%s %s' % (a['action'], a['node']) for a in actions))
    return revised
