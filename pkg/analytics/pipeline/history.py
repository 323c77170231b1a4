"""
Run history in the database, written after the run directory is complete.
"""
from django.db import transaction

from analytics.models import AnalysisRun, StageRecord


@transaction.atomic
def record_run(result, query):
    error = result.error.as_dict() if result.error is not None else None
    run = AnalysisRun.objects.create(
        run_id=result.run_id,
        query=query,
        coordinator=result.config.coordinator,
        seed=result.config.seed,
        status=AnalysisRun.SUCCEEDED if result.error is None else AnalysisRun.FAILED,
        exit_code=result.exit_code,
        run_dir=result.run_dir.path,
        error=error,
    )
    if result.store is not None:
        StageRecord.objects.bulk_create([
            StageRecord(
                run=run,
                node_id=output.node_id,
                tool=output.tool,
                status=output.status,
                item_count=output.raw.payload.item_count if output.raw is not None else None,
                omitted_count=output.distilled.omitted_count if output.distilled is not None else None,
                elapsed=output.elapsed,
            )
            for output in result.store.outputs()
        ])
    return run
