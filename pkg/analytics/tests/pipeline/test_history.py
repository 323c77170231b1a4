import pytest

from analytics.algorithms.results import NodeScores
from analytics.exceptions import NoToolForStage, PipelineError
from analytics.models import AnalysisRun
from analytics.pipeline import RunConfig, RunDirectory, RunResult, StageOutput, StageStore
from analytics.pipeline.history import record_run
from analytics.tools import RawResult, default_directive, distill

pytestmark = pytest.mark.django_db


@pytest.fixture
def result(tmp_path):
    return RunResult('run-1', RunDirectory(str(tmp_path / 'run-1')), RunConfig(str(tmp_path), seed=3))


def test_record_succeeded_run(result):
    raw = RawResult('NodeScores', NodeScores([0.5, 0.3, 0.2], [1, 2, 3]), tool='pagerank')
    result.store = StageStore()
    result.store.put(StageOutput('rank', 'pagerank', 'Ok', raw, distill(raw, default_directive('NodeScores')),
                                 started=1.0, finished=1.5))
    result.store.put(StageOutput('cycles', 'enumerate_cycles', 'Skipped', gate={'reason': 'gate rank is false'}))

    run = record_run(result, 'Rank the accounts')
    run.refresh_from_db()
    assert (run.run_id, run.status, run.exit_code, run.seed) == ('run-1', AnalysisRun.SUCCEEDED, 0, 3)
    assert run.error is None
    stages = {s.node_id: s for s in run.stages.all()}
    assert sorted(stages) == ['cycles', 'rank']
    assert (stages['rank'].item_count, stages['rank'].omitted_count, stages['rank'].elapsed) == (3, 0, 0.5)
    assert (stages['cycles'].status, stages['cycles'].item_count) == ('Skipped', None)


def test_record_failed_run(result):
    result.error = PipelineError('plan', NoToolForStage('communities', ['louvain']))
    run = record_run(result, 'Detect communities')
    run.refresh_from_db()
    assert (run.status, run.exit_code) == (AnalysisRun.FAILED, 2)
    assert run.error['details'] == {'stage': 'plan'}
    assert run.error['cause']['details'] == {'stage': 'communities', 'candidates': ['louvain']}
    assert not run.stages.exists()
    assert str(run) == 'run-1 (failed)'
