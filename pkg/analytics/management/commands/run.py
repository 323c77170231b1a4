from django.core.management.base import CommandError

from analytics.exceptions import PipelineError
from analytics.management.base import AnalyticsCommand
from analytics.pipeline import load_run_config, run
from analytics.pipeline.config import COORDINATORS
from analytics.pipeline.history import record_run


class Command(AnalyticsCommand):
    help = 'Answer an analytical question over a dataset directory and write a run directory'

    def add_arguments(self, parser):
        parser.add_argument('--query', required=True)
        parser.add_argument('--data', dest='data_dir')
        parser.add_argument('--kb', dest='knowledge_path')
        parser.add_argument('--config', dest='config_path')
        parser.add_argument('--coordinator', choices=COORDINATORS)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--width', type=int)
        parser.add_argument('--r-max', dest='r_max', type=int)
        parser.add_argument('--output', dest='output_dir', help='run directory (default: new one under AAG_RUNS_ROOT)')
        parser.add_argument('--run-id', dest='run_id')
        parser.add_argument('--no-record', action='store_true', help='do not store the run in the database')

    def handle(self, *args, **options):
        config = load_run_config(
            options['config_path'],
            data_dir=options['data_dir'], knowledge_path=options['knowledge_path'],
            coordinator=options['coordinator'], seed=options['seed'], width=options['width'],
            r_max=options['r_max'], output_dir=options['output_dir'], run_id=options['run_id'],
        )
        try:
            result = run(options['query'], config)
        except PipelineError as e:
            if not options['no_record']:
                record_run(e.result, options['query'])
            self.stderr.write('run directory: %s' % e.result.run_dir.path)
            raise CommandError('%s failed: %s' % (e.stage, e.cause), returncode=e.exit_code) from e
        if not options['no_record']:
            record_run(result, options['query'])
        self.stdout.write(result.report.to_markdown())
        self.stdout.write(self.style.SUCCESS('run directory: %s' % result.run_dir.path))
