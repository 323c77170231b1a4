import pytest

from analytics.exceptions import ConfigError, EmptyGraph, RefinementExhausted, SchemaViolation
from analytics.pipeline import ExecutionContext, StageStore, execute_dag
from analytics.pipeline.executor import injected_error
from analytics.planning import Binding, TaskDag, TaskNode
from analytics.planning.dag import ABOVE_MEAN, SOURCE_DATASET

from ..utils import canonical

DATASETS = {'transfer': {'directed': True, 'weighted': True}}


def context_for(pg, registry, store, **kwargs):
    return ExecutionContext(pg, registry, store, **kwargs)


def test_execute_gated_pipeline(small_pg, registry, store, cycle_dag):
    dag = cycle_dag()
    final = execute_dag(dag, context_for(small_pg, registry, store))
    assert final is dag
    assert [(o.node_id, o.status) for o in store.outputs()] == [('cycles', 'Ok'), ('flows', 'Ok'), ('rank', 'Ok')]
    cycles = store.get('cycles').raw.payload
    assert [canonical(c) for c in cycles.cycles] == [(1, 2, 3)]
    assert (cycles.bottleneck(0), cycles.total(0)) == (11000.0, 38000.5)
    assert store.get('cycles').distilled.summary_text.startswith('enumerate_cycles: ')


def test_false_gate_skips_downstream(small_pg, registry, store, cycle_dag):
    execute_dag(cycle_dag(anchor='Nobody'), context_for(small_pg, registry, store))
    cycles, flows = store.get('cycles'), store.get('flows')
    assert cycles.status == flows.status == 'Skipped'
    assert cycles.gate['reason'] == 'gate rank contains Nobody is false'
    assert cycles.gate['evidence'].startswith('pagerank: top')
    assert flows.gate == {'reason': 'upstream stage cycles was skipped'}


def test_low_ranked_focus_skips_downstream(small_pg, registry, store, cycle_dag):
    execute_dag(cycle_dag(anchor='Dee Ek', test=ABOVE_MEAN), context_for(small_pg, registry, store))
    assert store.get('rank').status == 'Ok'
    cycles, flows = store.get('cycles'), store.get('flows')
    assert cycles.status == flows.status == 'Skipped'
    assert cycles.gate['reason'] == 'gate rank above_mean Dee Ek is false'
    assert cycles.gate['verdict'] is False
    assert flows.gate == {'reason': 'upstream stage cycles was skipped'}


def test_high_ranked_focus_passes_gate(small_pg, registry, store, cycle_dag):
    execute_dag(cycle_dag(test=ABOVE_MEAN), context_for(small_pg, registry, store))
    assert [(o.node_id, o.status) for o in store.outputs()] == [('cycles', 'Ok'), ('flows', 'Ok'), ('rank', 'Ok')]


def test_injected_fault_is_refined(small_pg, registry, store, kg, coordinator, cycle_dag):
    refined = []
    context = context_for(small_pg, registry, store, kg=kg, coordinator=coordinator,
                          faults={'cycles': 'ParameterOutOfRange:max_len'},
                          on_refine=lambda dag, round: refined.append((dag.node_ids(), round)))
    final = execute_dag(cycle_dag(), context)
    assert final.node_ids() == ['rank', 'cycles~r1', 'flows']
    assert refined == [(['rank', 'cycles~r1', 'flows'], 1)]
    assert store.get('cycles').status == 'Error'
    assert store.get('cycles').error['param'] == 'max_len'
    assert store.get('cycles~r1').status == 'Ok'
    assert store.get('cycles~r1').round == 1
    assert final.node('cycles~r1').params['max_len'] == 6
    assert store.get('flows').status == 'Ok'


def test_refinement_exhausted(small_pg, registry, store, kg, coordinator, cycle_dag):
    context = context_for(small_pg, registry, store, kg=kg, coordinator=coordinator, r_max=0,
                          faults={'cycles': 'EmptyGraph'})
    with pytest.raises(RefinementExhausted):
        execute_dag(cycle_dag(), context)
    assert store.get('cycles').error['error'] == 'EmptyGraph'
    assert 'flows' not in store


def test_empty_result_is_accepted_when_nothing_improves(small_pg, registry, store, kg, coordinator):
    dag = TaskDag([
        TaskNode('cycles', 'heavy cycles', 'enumerate_cycles', {'min_weight': 1e9},
                 {'graph': Binding(SOURCE_DATASET, 'transfer')}),
    ], DATASETS)
    final = execute_dag(dag, context_for(small_pg, registry, store, kg=kg, coordinator=coordinator))
    assert final is dag
    output = store.get('cycles')
    assert output.status == 'Ok'
    assert output.raw.payload.item_count == 0


def test_width_does_not_change_outputs(small_pg, registry, cycle_dag):
    texts = []
    for width in (1, 4):
        store = StageStore()
        execute_dag(cycle_dag(), context_for(small_pg, registry, store, width=width))
        texts.append([(o.node_id, o.distilled.summary_text) for o in store.outputs()])
    assert texts[0] == texts[1]


def test_distill_budget_override(small_pg, registry, store, cycle_dag):
    execute_dag(cycle_dag(), context_for(small_pg, registry, store, distill_budget={'max_items': 1}))
    rank = store.get('rank').distilled
    assert len(rank.items) == 1
    assert rank.omitted_count == 3


@pytest.mark.parametrize('spec,error_class,details', [
    ('SchemaViolation:k', SchemaViolation, {'field': 'k', 'expected': None, 'given': None}),
    ('EmptyGraph', EmptyGraph, {}),
])
def test_injected_error(spec, error_class, details):
    node = TaskNode('cycles~r1', '', 'enumerate_cycles')
    error = injected_error(spec, node)
    assert type(error) is error_class
    assert error.message == 'injected %s on cycles~r1' % spec.partition(':')[0]
    assert error.details == details


@pytest.mark.parametrize('spec', ['KeyError', 'NoSuchError', 'exit_code'])
def test_unknown_fault(spec):
    with pytest.raises(ConfigError):
        injected_error(spec, TaskNode('cycles', '', 'enumerate_cycles'))
