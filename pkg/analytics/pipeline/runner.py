"""
End-to-end runs: query and raw data in, report and run directory out.
"""
import logging
import os
import uuid
from contextlib import contextmanager

from django.conf import settings

from analytics.construction import derive_schema, extract, load_catalog, read_sources
from analytics.coordinator import get_coordinator
from analytics.exceptions import AnalyticsError, NoToolForStage, PipelineError
from analytics.knowledge import expand_stub, load_knowledge
from analytics.planning.planner import plan
from analytics.tools import builtin_registry

from .executor import ExecutionContext, execute_dag
from .report import build_report
from .store import RunDirectory, StageStore

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

SETUP = 'setup'
SCHEMA = 'schema'
EXTRACT = 'extract'
PLAN = 'plan'
EXECUTE = 'execute'
REPORT = 'report'


class RunResult(object):
    def __init__(self, run_id, run_dir, config):
        self.run_id = run_id
        self.run_dir = run_dir
        self.config = config
        self.schema = None
        self.pg = None
        self.dag = None
        self.trace = None
        self.store = None
        self.report = None
        self.error = None

    @property
    def exit_code(self):
        return 0 if self.error is None else self.error.exit_code

    @property
    def status(self):
        return 'succeeded' if self.error is None else 'failed'


@contextmanager
def pipeline_stage(name):
    try:
        yield
    except PipelineError:
        raise
    except AnalyticsError as e:
        raise PipelineError(name, e) from e


@contextmanager
def run_log(run_dir):
    """
    Copy the ``analytics`` log records of this run into ``run.log``.

    The handler carries its own INFO level; the logger's level is left to the
    ``LOGGING`` setting.
    """
    handler = logging.FileHandler(run_dir.join('run.log'), encoding='utf-8')
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.setLevel(logging.INFO)
    root = logging.getLogger('analytics')
    root.addHandler(handler)
    try:
        yield handler
    finally:
        root.removeHandler(handler)
        handler.close()


def _datasets(pg):
    return {
        label: {'directed': relation['directed'], 'weighted': relation['weighted']}
        for label, relation in pg.summary()['relations'].items()
    }


def _plan(query, result, kg, registry, coordinator):
    config = result.config
    try:
        dag, trace = plan(
            query, kg, registry, coordinator, _datasets(result.pg),
            context={'high_value_threshold': config.high_value_threshold},
            k=config.retrieval_k, primary=result.schema.primary_relation(),
        )
    except AnalyticsError as e:
        result.run_dir.write_json('plan.json', {'dag': None, 'error': e.as_dict()})
        if isinstance(e, NoToolForStage):
            expand_stub(kg, query, task_id=e.stage, run_dir=result.run_dir.path)
        raise
    result.run_dir.write_json('plan.json', {'dag': dag.to_data(), 'trace': trace.to_data()})
    return dag, trace


def _execute(result, kg, registry, coordinator):
    config = result.config
    run_dir = result.run_dir

    def refined(dag, round):
        run_dir.write_json('plan.r%d.json' % round, {'round': round, 'dag': dag.to_data()})

    result.store = StageStore(run_dir)
    context = ExecutionContext(
        result.pg, registry, result.store, kg=kg, coordinator=coordinator, width=config.width,
        r_max=config.r_max, faults=config.inject_faults, distill_budget=config.distill_budget,
        on_refine=refined,
    )
    return execute_dag(result.dag, context)


def run(query, config, coordinator=None, kg=None, registry=None):
    """
    Run ``query`` under ``config``; returns a ``RunResult``.

    Module errors come back as ``PipelineError`` naming the stage they surfaced
    in, with ``error.json`` written next to whatever the run produced so far.
    """
    run_id = config.run_id or uuid.uuid4().hex
    run_dir = RunDirectory(config.output_dir or os.path.join(settings.AAG_RUNS_ROOT, run_id))
    result = RunResult(run_id, run_dir, config)

    with run_log(run_dir):
        logger.info('run %s: %r on %s', run_id, query, config.data_dir)
        run_dir.write_json('config.json', config.to_data())
        try:
            with pipeline_stage(SETUP):
                if coordinator is None:
                    coordinator = get_coordinator(config.coordinator, **config.coordinator_options)
                coordinator.budget = config.context_budget
                kg = kg if kg is not None else load_knowledge(config.knowledge_path)
                registry = registry if registry is not None else builtin_registry()

            with pipeline_stage(SCHEMA):
                catalog = load_catalog(config.data_dir)
                result.schema = derive_schema(query, catalog, kg, coordinator)
                run_dir.write_json('schema.json', result.schema.to_data())

            with pipeline_stage(EXTRACT):
                result.pg = extract(read_sources(catalog, result.schema), result.schema, catalog)
                run_dir.write_json('graph.json', result.pg.summary())

            with pipeline_stage(PLAN):
                result.dag, result.trace = _plan(query, result, kg, registry, coordinator)

            with pipeline_stage(EXECUTE):
                result.dag = _execute(result, kg, registry, coordinator)

            with pipeline_stage(REPORT):
                result.report = build_report(query, result.dag, result.store, coordinator)
                run_dir.write_text('report.md', result.report.to_markdown())
                run_dir.write_json('report.json', result.report.to_data())
        except PipelineError as e:
            logger.error('run %s failed in %s: %s', run_id, e.stage, e.cause)
            result.error = e
            e.result = result
            run_dir.write_json('error.json', e.as_dict())
            raise
        logger.info('run %s finished: %s', run_id, run_dir.join('report.md'))
    return result
