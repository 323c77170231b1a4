"""
Intent → task DAG.

The coordinator decomposes the intent into stages; every stage is then grounded
in the knowledge base and bound to a registered tool.
"""
import logging

from django.conf import settings
from rest_framework import serializers

from analytics.coordinator import PLAN, CoordinatorRequest
from analytics.exceptions import CyclicDag, NoToolForStage, PlanningFailed, SchemaValidationFailed
from analytics.tools.descriptors import BOOL
from analytics.tools.distill import DistillDirective, default_directive

from .dag import Binding, Gate, Intent, TaskDag, TaskNode, topological_order
from .validation import validate_dag

logger = logging.getLogger(__name__)

DEFAULT_RETRIEVAL_K = 6

ACCEPTED = 'accepted'
NO_TOOL = 'no tool'
NOT_REGISTERED = 'tool not registered'
OTHER_FAMILY = 'other family'
OTHER_TOOL = 'other tool'
INPUTS_INCOMPATIBLE = 'inputs incompatible'


def retrieval_k():
    return getattr(settings, 'AAG_RETRIEVAL_K', DEFAULT_RETRIEVAL_K)


class StageTrace(object):
    def __init__(self, stage_id, goal, considered, chosen=None, fallback=False):
        self.stage_id = stage_id
        self.goal = goal
        self.considered = considered
        self.chosen = chosen
        self.fallback = fallback

    def to_data(self):
        return {
            'stage': self.stage_id,
            'goal': self.goal,
            'considered': self.considered,
            'chosen': self.chosen,
            'fallback': self.fallback,
        }


class PlanTrace(object):
    def __init__(self, intent=None, stages=(), transcripts=()):
        self.intent = intent
        self.stages = list(stages)
        self.transcripts = list(transcripts)

    def stage(self, stage_id):
        for trace in self.stages:
            if trace.stage_id == stage_id:
                return trace
        raise KeyError(stage_id)

    def to_data(self):
        return {
            'intent': self.intent.to_data() if self.intent is not None else None,
            'stages': [s.to_data() for s in self.stages],
            'coordinator_attempts': len(self.transcripts),
        }


def parse_attribute_params(text, descriptor):
    """
    Parameters a knowledge attribute pins, written ``name=value, name=value``.
    """
    if not text:
        return {}
    if isinstance(text, dict):
        return dict(text)
    params = {}
    for item in str(text).split(','):
        name, _, value = item.partition('=')
        name, value = name.strip(), value.strip()
        spec = descriptor.param(name)
        if not name or spec is None:
            continue
        if spec.type == BOOL:
            params[name] = value.lower() in ('1', 'true', 'yes')
        else:
            try:
                params[name] = spec.coerce(value)
            except ValueError:
                continue
    return params


class _StageMatcher(object):
    def __init__(self, kg, registry, k):
        self.kg = kg
        self.registry = registry
        self.k = k
        self.snapshot = kg.snapshot()

    def _verdict(self, algorithm_id, family, stage, slot_kinds):
        tool = self.snapshot.node(algorithm_id).tool
        if not tool:
            return NO_TOOL
        if tool not in self.registry:
            return NOT_REGISTERED
        if stage['suggested_family'] and family != stage['suggested_family']:
            return OTHER_FAMILY
        if stage['suggested_tool'] and tool != stage['suggested_tool']:
            return OTHER_TOOL
        kinds = {}
        descriptor = self.registry.descriptor(tool)
        for slot, binding in slot_kinds.items():
            expected = descriptor.slot(slot).kind if descriptor.slot(slot) is not None else None
            kinds[slot] = binding(expected)
        if descriptor.slot_violations({s: k for s, k in kinds.items() if k is not None}):
            return INPUTS_INCOMPATIBLE
        return ACCEPTED

    def match(self, stage, slot_kinds):
        result = self.kg.retrieve(stage['goal'], self.k)
        considered = []
        chosen = None
        for candidate in result.candidates:
            family = candidate.trail[-1] if candidate.trail else None
            verdict = self._verdict(candidate.node_id, family, stage, slot_kinds)
            considered.append(dict(candidate.to_data(), verdict=verdict))
            if chosen is None and verdict == ACCEPTED:
                chosen = candidate.node_id

        fallback = False
        family = stage['suggested_family']
        if chosen is None and family in self.snapshot.nodes:
            # structured traversal of the suggested family, most useful first
            children = sorted(self.snapshot.children_of(family),
                              key=lambda i: (-self.snapshot.node(i).usefulness, i))
            for child in children:
                verdict = self._verdict(child, family, stage, slot_kinds)
                considered.append({'id': child, 'score': None, 'trail': self.snapshot.trail(child),
                                   'verdict': verdict})
                if verdict == ACCEPTED:
                    chosen = child
                    fallback = True
                    break
        if chosen is None:
            raise NoToolForStage(stage['id'], [c['id'] for c in considered])
        node = self.snapshot.node(chosen)
        trace = StageTrace(stage['id'], stage['goal'], considered, {
            'algorithm': chosen,
            'tool': node.tool,
            'family': self.snapshot.family_of(chosen),
            'trail': self.snapshot.trail(chosen),
        }, fallback)
        return node, trace


def _stage_order(stages):
    """
    Stage ids with producers first; the coordinator's order when dependencies are cyclic.
    """
    nodes = []
    for stage in stages:
        bindings = {slot: Binding.from_data(b) for slot, b in stage['bindings'].items()}
        gate = Gate.from_data(stage['gate']) if stage['gate'] else None
        nodes.append(TaskNode(stage['id'], stage['goal'], '', input_bindings=bindings, gate=gate))
    try:
        return topological_order(TaskDag(nodes))
    except CyclicDag:
        return [stage['id'] for stage in stages]


def plan(intent_text, kg, registry, coordinator, datasets=None, context=None, k=None, primary=None):
    """
    Turn ``intent_text`` into a validated ``(TaskDag, PlanTrace)``.

    ``datasets`` maps the relation labels stages may bind to their
    ``{'directed', 'weighted'}`` flags; ``context`` adds run facts for the
    coordinator (e.g. the high-value threshold); ``primary`` names the relation
    stage views are cut from.
    """
    if not len(registry):
        raise PlanningFailed('the tool registry is empty')
    datasets = dict(datasets or {})
    k = k or retrieval_k()
    payload = dict(context or {}, query=intent_text, datasets=datasets, tools=registry.names())
    if len(kg):
        payload['families'] = kg.retrieve(intent_text, k).families
    try:
        response = coordinator.complete(CoordinatorRequest(PLAN, payload))
    except SchemaValidationFailed as e:
        raise PlanningFailed('the coordinator gave no valid decomposition: %s' % e.message,
                             attempts=len(e.transcripts)) from e
    stages = {stage['id']: stage for stage in response.value['stages']}
    intent = Intent(intent_text, [s['goal'] for s in response.value['stages']], sorted(datasets)).check()

    matcher = _StageMatcher(kg, registry, k)
    output_kinds = {}
    nodes = {}
    traces = {}
    for stage_id in _stage_order(response.value['stages']):
        stage = stages[stage_id]
        bindings = {slot: Binding.from_data(b) for slot, b in stage['bindings'].items()}
        slot_kinds = {
            slot: (lambda expected, b=b: b.kind_seen(producer_kind=output_kinds.get(b.producer), slot_kind=expected))
            for slot, b in bindings.items()
        }
        algorithm, trace = matcher.match(stage, slot_kinds)
        descriptor = registry.descriptor(algorithm.tool)
        params = parse_attribute_params(algorithm.attributes.get('params'), descriptor)
        params.update(stage['params'])
        directive = directive_from_data(stage['directive']) if stage['directive'] else default_directive(
            descriptor.output_kind)
        nodes[stage_id] = TaskNode(
            stage_id, stage['goal'], algorithm.tool, params, bindings,
            family=trace.chosen['family'], algorithm=algorithm.id, directive=directive,
            gate=Gate.from_data(stage['gate']) if stage['gate'] else None,
        )
        output_kinds[stage_id] = descriptor.output_kind
        traces[stage_id] = trace
        logger.info('stage %s → %s (%s)', stage_id, algorithm.tool,
                    ' / '.join(trace.chosen['trail'] + [algorithm.id]))

    order = [stage['id'] for stage in response.value['stages']]
    dag = TaskDag([nodes[i] for i in order], datasets, primary=primary)
    trace = PlanTrace(intent, [traces[i] for i in order], response.transcripts)
    violations = validate_dag(dag, registry)
    if violations:
        raise PlanningFailed('the planned DAG does not validate', violations=[v.to_data() for v in violations])
    return dag, trace


def directive_from_data(data):
    try:
        return DistillDirective.from_data(data)
    except serializers.ValidationError as e:
        raise PlanningFailed('invalid distillation directive: %s' % e.detail)
