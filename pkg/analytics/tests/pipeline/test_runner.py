import glob
import json
import logging
import os

import pytest

from analytics.exceptions import PipelineError
from analytics.pipeline import RunConfig, run
from analytics.pipeline.runner import run_log
from analytics.pipeline.store import TIMING_FIELDS, RunDirectory

from ..utils import AML_QUERY, canonical


def read_json(*parts):
    with open(os.path.join(*parts), encoding='utf-8') as fp:
        return json.load(fp)


def stage_records(run_dir):
    records = {}
    for path in glob.glob(os.path.join(run_dir, 'stages', '*', 'stage.json')):
        data = read_json(path)
        records[data['node_id']] = {k: v for k, v in data.items() if k not in TIMING_FIELDS}
    return records


@pytest.fixture
def aml_run(aml_dataset, tmp_path):
    data_dir, _ = aml_dataset

    def go(name='run', **kwargs):
        config = RunConfig(data_dir, output_dir=str(tmp_path / name), **kwargs)
        return run(AML_QUERY, config)
    return go


def test_aml_run_flags_the_planted_cycles(aml_dataset, aml_run):
    _, manifest = aml_dataset
    result = aml_run()
    assert (result.exit_code, result.status) == (0, 'succeeded')
    assert result.dag.node_ids() == ['risk_ranking', 'cycle_detection', 'flow_estimation', 'transaction_summary']
    assert manifest['background_cycles'] == []
    flagged = sorted(canonical(c['cycle']) for c in result.report.flagged_cycles)
    assert flagged == sorted(tuple(c['members']) for c in manifest['planted_cycles'])
    assert all(c['bottleneck'] >= manifest['threshold'] for c in result.report.flagged_cycles)
    assert {o.status for o in result.store.outputs()} == {'Ok'}


def test_run_directory(aml_run):
    result = aml_run()
    run_dir = result.run_dir.path
    for name in ('config.json', 'schema.json', 'graph.json', 'plan.json', 'report.md', 'report.json', 'run.log'):
        assert os.path.isfile(os.path.join(run_dir, name)), name
    assert not os.path.exists(os.path.join(run_dir, 'error.json'))
    assert read_json(run_dir, 'graph.json')['relations']['transfer']['directed']
    plan = read_json(run_dir, 'plan.json')
    assert [n['id'] for n in plan['dag']['nodes']][0] == 'risk_ranking'
    assert sorted(stage_records(run_dir)) == [
        'cycle_detection', 'flow_estimation', 'risk_ranking', 'transaction_summary']
    report = read_json(run_dir, 'report.json')
    assert report['query'] == AML_QUERY
    assert {s['stage'] for s in report['sections']} == set(result.report.cited())
    with open(os.path.join(run_dir, 'run.log'), encoding='utf-8') as fp:
        log = fp.read()
    assert 'stage cycle_detection → enumerate_cycles' in log
    assert 'finished' in log


def test_runs_default_to_the_runs_root(aml_dataset, runs_root):
    data_dir, _ = aml_dataset
    result = run(AML_QUERY, RunConfig(data_dir, run_id='first'))
    assert result.run_dir.path == os.path.join(runs_root, 'first')


def test_runs_are_deterministic(aml_run):
    first, second = aml_run('first', width=1), aml_run('second', width=4)
    for name in ('report.json', 'report.md', 'plan.json', 'schema.json'):
        with open(first.run_dir.join(name), 'rb') as a, open(second.run_dir.join(name), 'rb') as b:
            assert a.read() == b.read(), name
    assert stage_records(first.run_dir.path) == stage_records(second.run_dir.path)


def test_injected_fault_is_refined(aml_dataset, aml_run):
    _, manifest = aml_dataset
    result = aml_run(inject_faults={'cycle_detection': 'ParameterOutOfRange:max_len'})
    assert result.exit_code == 0
    assert 'cycle_detection~r1' in result.dag
    assert read_json(result.run_dir.path, 'plan.r1.json')['round'] == 1
    assert result.store.get('cycle_detection').status == 'Error'
    flagged = sorted(canonical(c['cycle']) for c in result.report.flagged_cycles)
    assert flagged == sorted(tuple(c['members']) for c in manifest['planted_cycles'])


def test_query_without_tools(aml_dataset, tmp_path):
    data_dir, _ = aml_dataset
    out = str(tmp_path / 'community')
    with pytest.raises(PipelineError) as excinfo:
        run('Detect communities among accounts', RunConfig(data_dir, output_dir=out))
    error = excinfo.value
    assert (error.stage, error.exit_code) == ('plan', 2)
    assert error.result.status == 'failed'
    assert read_json(out, 'error.json')['cause']['error'] == 'NoToolForStage'
    assert read_json(out, 'plan.json')['dag'] is None
    assert read_json(out, 'expansion-1.json')['task_id'] == 'communities'
    assert not os.path.exists(os.path.join(out, 'report.md'))


def test_missing_catalog(tmp_path):
    data_dir = tmp_path / 'empty'
    data_dir.mkdir()
    out = str(tmp_path / 'out')
    with pytest.raises(PipelineError) as excinfo:
        run(AML_QUERY, RunConfig(str(data_dir), output_dir=out))
    assert (excinfo.value.stage, excinfo.value.exit_code) == ('schema', 4)
    assert read_json(out, 'error.json')['details'] == {'stage': 'schema'}
    assert read_json(out, 'config.json')['data_dir'] == str(data_dir)


def test_overlapping_run_logs_keep_the_logger_level(tmp_path):
    logger = logging.getLogger('analytics')
    level, handlers = logger.level, list(logger.handlers)
    first, second = RunDirectory(str(tmp_path / 'first')), RunDirectory(str(tmp_path / 'second'))
    with run_log(first) as handler:
        assert handler.level == logging.INFO
        with run_log(second):
            assert logger.level == level
            logging.getLogger('analytics.pipeline').warning('both runs are open')
        assert logger.level == level
    assert logger.level == level
    assert logger.handlers == handlers
    for run_dir in (first, second):
        with open(run_dir.join('run.log'), encoding='utf-8') as fp:
            assert 'WARNING analytics.pipeline: both runs are open' in fp.read()
