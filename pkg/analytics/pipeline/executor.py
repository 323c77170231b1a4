"""
Task DAG execution with the refinement loop.

A pass runs every node whose producers are stored and Ok, up to ``width`` at a
time. Error and LowQuality outcomes block their consumers; at the end of a pass
the flagged nodes go to refinement and the next pass picks up the revised DAG.
Outputs already stored are never recomputed.
"""
import logging
import threading
import time
from concurrent import futures

from analytics import exceptions
from analytics.algorithms import top_k
from analytics.algorithms.results import NodeSet
from analytics.construction.views import materialize_stage_input
from analytics.exceptions import AnalyticsError, RefinementExhausted
from analytics.knowledge.graph import NOT_USEFUL, USEFUL
from analytics.planning.dag import (
    EDGES, LITERAL, NODES, SOURCE_DATASET, TOP1, VIEW, literal_value, topological_order
)
from analytics.planning.refinement import ERROR as ERROR_OUTCOME
from analytics.planning.refinement import ExecutionFeedback, refine
from analytics.tools.distill import default_directive, distill
from analytics.tools.kinds import TABLE
from analytics.tools.results import InvocationRequest

from .store import ERROR, LOW_QUALITY, OK, SKIPPED, StageOutput

logger = logging.getLogger(__name__)

RUN = 'run'
WAIT = 'wait'
BLOCKED = 'blocked'
SKIP = 'skip'


class ExecutionContext(object):
    def __init__(self, pg, registry, store, kg=None, coordinator=None, width=4, r_max=3, faults=None,
                 distill_budget=None, on_refine=None):
        self.pg = pg
        self.registry = registry
        self.store = store
        self.kg = kg
        self.coordinator = coordinator
        self.width = width
        self.r_max = r_max
        self.faults = dict(faults or {})
        self.distill_budget = dict(distill_budget or {})
        self.on_refine = on_refine
        self._fired = set()
        self._lock = threading.Lock()

    def resolver(self, dag):
        """
        Node reference → external key on the primary relation's source entity.
        """
        if dag.primary is None or dag.primary not in self.pg.relations:
            return None
        label = self.pg.relation(dag.primary).src_label
        return lambda ref: self.pg.resolve_key(label, ref)

    def take_fault(self, node):
        with self._lock:
            spec = self.faults.get(node.base_id)
            if spec is None or node.base_id in self._fired:
                return None
            self._fired.add(node.base_id)
        return injected_error(spec, node)


def injected_error(spec, node):
    """
    Build the error named by a fault spec ``ErrorClass`` or ``ErrorClass:param``.
    """
    name, _, param = spec.partition(':')
    cls = getattr(exceptions, name, None)
    if not isinstance(cls, type) or not issubclass(cls, AnalyticsError):
        raise exceptions.ConfigError('unknown fault %r for %s' % (spec, node.id))
    message = 'injected %s on %s' % (name, node.id)
    if issubclass(cls, exceptions.SchemaViolation):
        return cls(message, field=param or None)
    if issubclass(cls, exceptions.ParameterOutOfRange):
        return cls(message, param=param or None)
    return cls(message)


##########
# Inputs #
##########

def stage_input(binding, slot_kind, dag, context):
    pg = context.pg
    if binding.kind == LITERAL:
        return literal_value(binding.ref)
    if binding.kind == SOURCE_DATASET:
        if binding.selector == EDGES or (binding.selector is None and slot_kind == TABLE):
            return pg.edge_table(binding.ref)
        return pg.graph(binding.ref)

    payload = context.store.get(binding.ref).raw.payload
    if binding.selector is None:
        return payload
    if binding.selector == NODES:
        return NodeSet(payload.node_union())
    if binding.selector == TOP1:
        return top_k(payload, 1)
    view = materialize_stage_input(payload, pg, dag.primary, provenance=binding.ref)
    if binding.selector == VIEW:
        return view
    return view.edge_table()


def node_directive(node, descriptor, context, resolve):
    directive = node.directive or default_directive(descriptor.output_kind)
    if context.distill_budget:
        directive = directive.replace(**context.distill_budget)
    if directive.focus is not None and resolve is not None:
        try:
            directive = directive.replace(focus=resolve(directive.focus))
        except AnalyticsError:
            pass
    return directive


def run_node(node, dag, context, round=0):
    """
    Execute one node; returns ``(StageOutput, ExecutionFeedback or None)``.
    """
    started = time.time()
    try:
        fault = context.take_fault(node)
        if fault is not None:
            raise fault
        descriptor = context.registry.descriptor(node.tool_name)
        inputs = {}
        for slot, binding in sorted(node.input_bindings.items()):
            spec = descriptor.slot(slot)
            inputs[slot] = stage_input(binding, spec.kind if spec else None, dag, context)
        raw = context.registry.invoke(InvocationRequest(node.tool_name, inputs, node.params))
        distilled = distill(raw, node_directive(node, descriptor, context, context.resolver(dag)))
    except AnalyticsError as e:
        feedback = ExecutionFeedback.from_error(node.id, e)
        logger.info('stage %s failed: %s', node.id, e)
        output = StageOutput(node.id, node.tool_name, ERROR, error=feedback.detail, round=round,
                             started=started, finished=time.time())
        return output, feedback

    if raw.payload.item_count == 0:
        output = StageOutput(node.id, node.tool_name, LOW_QUALITY, raw, distilled, round=round,
                             started=started, finished=time.time())
        return output, ExecutionFeedback.low_quality(node.id, item_count=0)
    return StageOutput(node.id, node.tool_name, OK, raw, distilled, round=round, started=started,
                       finished=time.time()), None


class _Pass(object):
    """
    One sweep over the DAG; collects feedback and LowQuality outputs held for refinement.
    """

    def __init__(self, dag, context, round):
        self.dag = dag
        self.context = context
        self.round = round
        self.order = topological_order(dag)
        self.blocked = set()
        self.pending = {}
        self.feedback = []
        self.running = {}

    def readiness(self, node):
        store = self.context.store
        for producer, _ in node.dependencies():
            output = store.get(producer)
            if producer in self.blocked or producer in self.pending:
                return BLOCKED, None
            if output is None:
                return WAIT, None
            if output.status in (ERROR, LOW_QUALITY):
                return BLOCKED, None
            if output.status == SKIPPED:
                return SKIP, {'reason': 'upstream stage %s was skipped' % producer}
        gate = node.gate
        if gate is not None:
            output = store.get(gate.producer)
            verdict = gate.evaluate(output.raw.payload, self.context.resolver(self.dag))
            logger.info('gate of %s (%s): %s', node.id, gate.describe(), verdict)
            if not verdict:
                return SKIP, dict(gate.to_data(), verdict=False, reason='gate %s is false' % gate.describe(),
                                  evidence=output.distilled.summary_text)
        return RUN, None

    def schedule(self, pool):
        changed = False
        store = self.context.store
        for node_id in self.order:
            if node_id in self.running.values() or node_id in self.blocked or node_id in self.pending:
                continue
            stored = store.get(node_id)
            if stored is not None:
                if stored.status == ERROR and node_id not in self.blocked:
                    # failed in an earlier pass and refinement left it alone
                    self.blocked.add(node_id)
                    self.feedback.append(ExecutionFeedback(node_id, ERROR_OUTCOME, stored.error))
                    changed = True
                continue
            node = self.dag.node(node_id)
            state, detail = self.readiness(node)
            if state == BLOCKED:
                self.blocked.add(node_id)
                changed = True
            elif state == SKIP:
                store.put(StageOutput(node_id, node.tool_name, SKIPPED, gate=detail, round=self.round))
                changed = True
            elif state == RUN:
                self.running[pool.submit(run_node, node, self.dag, self.context, self.round)] = node_id
                changed = True
        return changed

    def collect(self, future):
        node_id = self.running.pop(future)
        output, feedback = future.result()
        node = self.dag.node(node_id)
        if output.status == LOW_QUALITY:
            self.pending[node_id] = output
        else:
            self.context.store.put(output)
        if feedback is not None:
            self.feedback.append(feedback)
            if output.status == ERROR:
                self.blocked.add(node_id)
        self.knowledge_signal(node, NOT_USEFUL if output.status == ERROR else USEFUL)

    def knowledge_signal(self, node, signal):
        kg = self.context.kg
        if kg is None or not node.algorithm or node.algorithm not in kg.snapshot().nodes:
            return
        if signal == USEFUL and node.id in self.pending:
            return
        kg.record_feedback(node.algorithm, signal)

    def run(self):
        with futures.ThreadPoolExecutor(max_workers=self.context.width) as pool:
            while True:
                changed = self.schedule(pool)
                if not self.running:
                    if changed:
                        continue
                    break
                done, _ = futures.wait(list(self.running), return_when=futures.FIRST_COMPLETED)
                for future in sorted(done, key=lambda f: self.running[f]):
                    self.collect(future)
        return self


def _settle(pending, dag, store):
    """
    Store LowQuality outputs held back for refinement: accepted where the node
    survived unchanged, LowQuality where it was revised away.
    """
    for node_id in sorted(pending):
        output = pending[node_id]
        store.put(output.accepted() if node_id in dag else output)


def execute_dag(dag, context):
    """
    Execute ``dag`` to completion, refining it at most ``context.r_max`` times.

    Returns the final DAG; stage outputs are in ``context.store``.
    """
    round = 0
    while True:
        sweep = _Pass(dag, context, round).run()
        flagged = sorted(sweep.feedback, key=lambda f: f.node_id)
        if not flagged:
            return dag
        logger.info('pass %d flagged %s', round, ', '.join('%s (%s)' % (f.node_id, f.outcome) for f in flagged))
        try:
            revised = refine(dag, flagged, context.kg, context.registry, context.coordinator, round, context.r_max)
        except RefinementExhausted:
            _settle(sweep.pending, (), context.store)
            raise
        round += 1
        _settle(sweep.pending, revised, context.store)
        if revised is not dag and context.on_refine is not None:
            context.on_refine(revised, round)
        dag = revised
