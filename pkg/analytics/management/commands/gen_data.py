from analytics.management.base import AnalyticsCommand
from analytics.pipeline.dataset import (
    DEFAULT_CYCLE_LENGTHS, DEFAULT_SEED, DEFAULT_THRESHOLD, DEFAULT_TRANSACTIONS, DEFAULT_USERS, generate_dataset,
    parse_cycle_specs
)


class Command(AnalyticsCommand):
    help = 'Generate a synthetic transfer dataset with planted high-value cycles'

    def add_arguments(self, parser):
        parser.add_argument('--users', type=int, default=DEFAULT_USERS)
        parser.add_argument('--txns', type=int, default=DEFAULT_TRANSACTIONS)
        parser.add_argument(
            '--cycles', default=','.join(str(n) for n in DEFAULT_CYCLE_LENGTHS),
            help='comma separated cycle lengths, each optionally followed by @min-max amounts',
        )
        parser.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD)
        parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
        parser.add_argument('-o', '--output', required=True)

    def handle(self, *args, **options):
        manifest = generate_dataset(
            options['output'], n_users=options['users'], n_txns=options['txns'],
            planted=parse_cycle_specs(options['cycles']), seed=options['seed'], threshold=options['threshold'],
        )
        self.stdout.write(self.style.SUCCESS('%d accounts, %d transactions, %d planted cycles in %s' % (
            manifest['users'], manifest['transactions'], len(manifest['planted_cycles']), options['output'])))
