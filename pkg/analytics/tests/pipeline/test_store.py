import json
import os

import pytest

from analytics.algorithms.results import NodeScores
from analytics.exceptions import ExecutionError
from analytics.pipeline import RunDirectory, StageOutput, StageStore
from analytics.tools import RawResult, default_directive, distill


def scored_output(node_id='rank'):
    raw = RawResult('NodeScores', NodeScores([0.5, 0.25, 0.25], ['a', 'b', 'c']), tool='pagerank')
    return StageOutput(node_id, 'pagerank', 'Ok', raw, distill(raw, default_directive('NodeScores')),
                       started=10.0, finished=10.25)


def test_stage_output():
    output = scored_output()
    assert output.ok
    assert output.elapsed == 0.25
    assert output.to_data()['stats'] == {'item_count': 3, 'byte_size': len(json.dumps(
        output.raw.payload.to_data(), sort_keys=True, separators=(',', ':')))}
    assert output.to_data()['omitted_count'] == 0
    with pytest.raises(ValueError):
        StageOutput('rank', 'pagerank', 'Maybe')


def test_accepted_output():
    low = StageOutput('cycles', 'enumerate_cycles', 'LowQuality', round=2)
    accepted = low.accepted()
    assert (accepted.status, accepted.round, low.status) == ('Ok', 2, 'LowQuality')
    assert StageOutput('x', 't', 'Skipped').elapsed is None


def test_store_is_write_once():
    store = StageStore()
    store.put(scored_output())
    with pytest.raises(ExecutionError) as excinfo:
        store.put(scored_output())
    assert excinfo.value.details == {'node': 'rank'}
    assert 'rank' in store
    assert len(store) == 1
    assert store.get('missing') is None


def test_store_outputs_are_sorted():
    store = StageStore()
    for node_id in ('rank~r1', 'cycles', 'rank'):
        store.put(StageOutput(node_id, 't', 'Skipped'))
    assert [o.node_id for o in store.outputs()] == ['cycles', 'rank', 'rank~r1']


def test_store_persists_outputs(tmp_path):
    run_dir = RunDirectory(str(tmp_path / 'run'))
    store = StageStore(run_dir)
    store.put(scored_output())
    store.put(StageOutput('cycles', 'enumerate_cycles', 'Skipped', gate={'reason': 'gate rank count> 5 is false'}))
    assert sorted(os.listdir(run_dir.join('stages', 'rank'))) == ['distilled.json', 'raw.json', 'stage.json']
    assert os.listdir(run_dir.join('stages', 'cycles')) == ['stage.json']
    assert run_dir.read_json('stages/rank/raw.json')['kind'] == 'NodeScores'
    assert run_dir.read_json('stages/rank/distilled.json')['summary_text'].startswith('pagerank: top 3 of 3')
    assert run_dir.read_json('stages/cycles/stage.json')['gate'] == {'reason': 'gate rank count> 5 is false'}


def test_run_directory(tmp_path):
    run_dir = RunDirectory(str(tmp_path / 'a' / 'b'))
    run_dir.write_json('nested/data.json', {'b': 1, 'a': [1.5]})
    with open(run_dir.join('nested', 'data.json'), encoding='utf-8') as fp:
        assert fp.read() == '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'
    run_dir.write_text('report.md', '# r\n')
    assert run_dir.exists('report.md')
    assert not run_dir.exists('plan.json')
