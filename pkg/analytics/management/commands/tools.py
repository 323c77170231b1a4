from analytics.management.base import AnalyticsCommand
from analytics.tools import builtin_registry


class Command(AnalyticsCommand):
    help = 'List or describe the registered analytics tools'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        listing = actions.add_parser('list')
        listing.add_argument('--json', action='store_true')
        describe = actions.add_parser('describe')
        describe.add_argument('name')

    def handle(self, *args, **options):
        registry = builtin_registry()
        if options['action'] == 'describe':
            self.write_json(registry.describe(options['name']))
            return
        if options['json']:
            self.write_json(registry.describe_all())
            return
        for name in registry.names():
            descriptor = registry.descriptor(name)
            slots = ', '.join('%s:%s' % (s.name, s.kind) for s in descriptor.inputs)
            self.stdout.write('%-24s %-18s (%s) -> %s' % (name, descriptor.family, slots, descriptor.output_kind))
