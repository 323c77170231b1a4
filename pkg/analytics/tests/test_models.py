import pytest
from freezegun import freeze_time

from analytics.models import AnalysisRun, StageRecord


def test_analysis_run_instance_creation():
    AnalysisRun(run_id='run-1', query='Is Anna Lee laundering money?', coordinator='mock', seed=777,
                status=AnalysisRun.SUCCEEDED, run_dir='/tmp/runs/run-1')


def test_stage_record_instance_creation():
    StageRecord(run_id=1, node_id='risk_ranking', tool='pagerank', status='Ok', item_count=10)


@pytest.mark.django_db
def test_string_representations(stage_record):
    stage_record.node_id = 'cycle_detection'
    stage_record.status = 'Skipped'
    assert str(stage_record) == '%s/cycle_detection: Skipped' % stage_record.run.run_id
    assert str(stage_record.run) == '%s (succeeded)' % stage_record.run.run_id


@pytest.mark.django_db
def test_runs_are_listed_newest_first(analysis_run_factory):
    with freeze_time('2024-01-01T10:00:00Z'):
        first = analysis_run_factory()
    with freeze_time('2024-01-01T11:00:00Z'):
        second = analysis_run_factory()
    assert list(AnalysisRun.objects.all()) == [second, first]
