from analytics.management.base import AnalyticsCommand
from analytics.pipeline import failure_bench


class Command(AnalyticsCommand):
    help = 'Simulate end-to-end success of workflows with independently failing stages'

    def add_arguments(self, parser):
        parser.add_argument('--stages', type=int, default=4)
        parser.add_argument('--p', type=float, default=0.9)
        parser.add_argument('--trials', type=int, default=10000)
        parser.add_argument('--seed', type=int, default=777)

    def handle(self, *args, **options):
        result = failure_bench(options['stages'], options['p'], options['trials'], options['seed'])
        self.write_json(result.to_data())
