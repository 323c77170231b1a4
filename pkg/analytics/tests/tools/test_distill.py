import pytest
from rest_framework import serializers

from analytics.algorithms.results import CycleSet, FlowSummary, NodeScores, NodeSet, Scalar, Table
from analytics.exceptions import ModeMismatch
from analytics.tools import CYCLE_SET, NODE_SCORES, NODE_SET, SCALAR, TABLE, RawResult
from analytics.tools.distill import (
    HEAD, SUBGRAPH_SUMMARY, THRESHOLD, TOP_K, TRUNCATION_MARKER, DistillDirective, default_directive, distill
)
from analytics.tools.results import canonical_json


def scores_result():
    return RawResult(NODE_SCORES, NodeScores([0.1, 0.4, 0.4, 0.05, 0.05], ['a', 'b', 'c', 'd', 'e']),
                     tool='pagerank')


def cycles_result():
    return RawResult(CYCLE_SET, CycleSet([[1, 2, 3], [1, 4]], flows=[[5.0, 6.0, 7.0], [8.0, 9.0]]),
                     tool='enumerate_cycles')


def test_top_k_breaks_ties_by_id():
    distilled = distill(scores_result(), DistillDirective(TOP_K, k=2))
    assert distilled.items == [
        {'rank': 1, 'node': 'b', 'score': 0.4},
        {'rank': 2, 'node': 'c', 'score': 0.4},
    ]
    assert distilled.omitted_count == 3
    assert distilled.summary_text == (
        'pagerank: top 2 of 5 nodes by score\n'
        '1. b score=0.4\n'
        '2. c score=0.4\n'
        '(3 more omitted)'
    )


def test_top_k_reports_the_focus_rank():
    distilled = distill(scores_result(), DistillDirective(TOP_K, k=2, focus='d'))
    assert distilled.summary_text.endswith('focus d: rank 4 of 5, score=0.05')
    missing = distill(scores_result(), DistillDirective(TOP_K, k=2, focus='z'))
    assert missing.summary_text.endswith('focus z: not ranked')


def test_unconverged_scores_are_flagged():
    raw = RawResult(NODE_SCORES, NodeScores([0.5, 0.5], ['a', 'b'], converged=False, iterations=3))
    assert 'did not converge after 3 iterations' in distill(raw, DistillDirective(TOP_K)).summary_text


def test_threshold_on_scores():
    distilled = distill(scores_result(), DistillDirective(THRESHOLD, threshold=0.1))
    assert [item['node'] for item in distilled.items] == ['b', 'c', 'a']
    assert distilled.omitted_count == 2
    assert distilled.summary_text.startswith('pagerank: 3 of 5 nodes with score >= 0.1')


def test_threshold_on_a_table_column():
    table = Table(['name', 'weight'], [['x', 5.0], ['y', 50.0], ['z', None]])
    distilled = distill(RawResult(TABLE, table), DistillDirective(THRESHOLD, threshold=10.0))
    assert distilled.items == [{'name': 'y', 'weight': 50.0}]
    assert distilled.summary_text.startswith('Table: 1 of 3 rows with weight >= 10')
    with pytest.raises(ModeMismatch):
        distill(RawResult(TABLE, table), DistillDirective(THRESHOLD, threshold=1.0, column='amount'))


def test_head_on_flow_summary_with_focus():
    flows = FlowSummary([
        ['a', 5.0, 10.3, 1, 2, -5.3],
        ['b', 10.1, 20.2, 1, 1, -10.1],
        ['c', 20.5, 5.0, 2, 1, 15.5],
    ])
    distilled = distill(RawResult(TABLE, flows, tool='aggregate_flows'), DistillDirective(HEAD, k=1, focus='c'))
    assert distilled.items == [
        {'group': 'a', 'in_total': 5.0, 'out_total': 10.3, 'in_count': 1, 'out_count': 2, 'net': -5.3},
    ]
    assert distilled.omitted_count == 2
    assert 'focus c: in=20.5 (2), out=5 (1), net=15.5' in distilled.summary_text
    unknown = distill(RawResult(TABLE, flows), DistillDirective(HEAD, focus='q'))
    assert unknown.summary_text.endswith('focus q: no flows')


def test_head_on_component_labels():
    labels = NodeScores([0, 0, 2, 0], ['a', 'b', 'c', 'd'], labeling=True)
    distilled = distill(RawResult(NODE_SCORES, labels), DistillDirective(HEAD))
    assert distilled.summary_text.endswith('2 components, largest has 3 nodes')


def test_head_on_scalar():
    distilled = distill(RawResult(SCALAR, Scalar(42)), DistillDirective(HEAD))
    assert distilled.items == [{'value': 42}]
    assert distilled.omitted_count == 0


def test_cycle_summary_is_shortest_first():
    distilled = distill(cycles_result(), DistillDirective(SUBGRAPH_SUMMARY, focus=4))
    assert distilled.items[0] == {'cycle': [1, 4], 'length': 2, 'bottleneck': 8.0, 'total': 17.0}
    assert distilled.items[1]['cycle'] == [1, 2, 3]
    assert distilled.summary_text.split('\n') == [
        'enumerate_cycles: 2 of 2 cycles, shortest first',
        '1 -> 4 (bottleneck=8, total=17)',
        '1 -> 2 -> 3 (bottleneck=5, total=18)',
        '4 distinct nodes, 5 distinct edges',
        'bottleneck range 5..8, total flow range 17..18',
        'focus 4: in 1 of 2 cycles',
    ]


def test_cycle_summary_respects_max_paths_and_truncation_flag():
    raw = RawResult(CYCLE_SET, CycleSet([[1, 2], [1, 3], [2, 3]], truncated=True))
    distilled = distill(raw, DistillDirective(SUBGRAPH_SUMMARY, max_paths=2))
    assert len(distilled.items) == 2
    assert distilled.omitted_count == 1
    assert 'bottleneck' not in distilled.items[0]
    assert distilled.summary_text.endswith('enumeration hit the cycle cap, more cycles exist')


def test_node_set_summary():
    raw = RawResult(NODE_SET, NodeSet(['a', 'b'], edge_count=1))
    distilled = distill(raw, DistillDirective(SUBGRAPH_SUMMARY, focus='c'))
    assert distilled.items == [{'node': 'a'}, {'node': 'b'}]
    assert '1 induced edges' in distilled.summary_text
    assert distilled.summary_text.endswith('focus c: not a member')


@pytest.mark.parametrize('mode,raw', [
    (TOP_K, cycles_result()),
    (SUBGRAPH_SUMMARY, scores_result()),
    (HEAD, cycles_result()),
])
def test_incompatible_mode(mode, raw):
    with pytest.raises(ModeMismatch):
        distill(raw, DistillDirective(mode, threshold=1.0))


def test_item_budget():
    raw = RawResult(NODE_SCORES, NodeScores([1.0 / 100] * 100, ['n%03d' % i for i in range(100)]))
    distilled = distill(raw, DistillDirective(TOP_K, k=100, max_items=20))
    assert len(distilled.items) == 20
    assert distilled.omitted_count == 80


def test_character_budget_drops_items():
    raw = RawResult(NODE_SCORES, NodeScores([1.0 / 100] * 100, ['n%03d' % i for i in range(100)]))
    distilled = distill(raw, DistillDirective(TOP_K, k=100, max_chars=300))
    assert 0 < len(distilled.items) < 100
    assert distilled.omitted_count == 100 - len(distilled.items)
    assert len(distilled.summary_text) <= 300
    assert len(canonical_json(distilled.items)) <= 300
    assert TRUNCATION_MARKER not in distilled.summary_text


def test_summary_cut_with_marker_when_nothing_fits():
    distilled = distill(cycles_result(), DistillDirective(SUBGRAPH_SUMMARY, max_chars=30))
    assert distilled.items == []
    assert distilled.omitted_count == 2
    assert len(distilled.summary_text) == 30
    assert distilled.summary_text.endswith(TRUNCATION_MARKER)


def test_distill_is_pure():
    raw = scores_result()
    directive = DistillDirective(TOP_K, k=3, focus='a')
    assert distill(raw, directive).to_data() == distill(raw, directive).to_data()
    assert distill(raw, directive).provenance == {'tool': 'pagerank', 'directive': directive.to_data()}


def test_budget_defaults_from_settings(settings):
    settings.AAG_DISTILL_BUDGET = {'max_items': 7}
    directive = DistillDirective(TOP_K)
    assert directive.max_items == 7
    assert directive.max_chars == 4000


def test_default_directives():
    assert default_directive(NODE_SCORES).mode == TOP_K
    assert default_directive(CYCLE_SET).mode == SUBGRAPH_SUMMARY
    assert default_directive(NODE_SET).mode == SUBGRAPH_SUMMARY
    assert default_directive(TABLE).mode == HEAD
    assert default_directive(NODE_SCORES, k=3).k == 3


@pytest.mark.parametrize('data', [
    {'mode': 'Everything'},
    {'mode': THRESHOLD},
    {'mode': TOP_K, 'k': 0},
    {'mode': HEAD, 'max_chars': 0},
])
def test_directive_validation(data):
    with pytest.raises(serializers.ValidationError):
        DistillDirective.from_data(data)


def test_directive_from_data():
    directive = DistillDirective.from_data({'mode': SUBGRAPH_SUMMARY, 'max_paths': 25, 'focus': 'Anna Lee'})
    assert directive.max_paths == 25
    assert directive.focus == 'Anna Lee'
    assert directive.k == 10
