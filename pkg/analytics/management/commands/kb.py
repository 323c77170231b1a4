from analytics.knowledge import CATEGORY, build_knowledge, load_knowledge
from analytics.management.base import AnalyticsCommand


class Command(AnalyticsCommand):
    help = 'Build or inspect a knowledge file'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        build = actions.add_parser('build', help='build a knowledge file from a documentation tree')
        build.add_argument('docs_dir')
        build.add_argument('-o', '--output', required=True)
        show = actions.add_parser('show', help='print the hierarchy of a knowledge file')
        show.add_argument('path')

    def handle(self, *args, **options):
        if options['action'] == 'build':
            kg = build_knowledge(options['docs_dir'], options['output'])
            self.stdout.write(self.style.SUCCESS('wrote %d nodes to %s' % (len(kg), options['output'])))
            return
        snapshot = load_knowledge(options['path']).snapshot()
        for category in snapshot.by_level(CATEGORY):
            self.stdout.write(category.name)
            for family in snapshot.children_of(category.id):
                self.stdout.write('  %s' % snapshot.node(family).name)
                for algorithm in snapshot.children_of(family):
                    node = snapshot.node(algorithm)
                    self.stdout.write('    %s [%s] u=%.3f' % (node.id, node.tool or '-', node.usefulness))
