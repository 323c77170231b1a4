import json

from django.core.management.base import BaseCommand, CommandError

from analytics.exceptions import AnalyticsError


class AnalyticsCommand(BaseCommand):
    """
    Management command whose engine errors exit with their exit code family.
    """

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except AnalyticsError as e:
            raise CommandError('%s: %s' % (e.__class__.__name__, e.message), returncode=e.exit_code) from e

    def write_json(self, data):
        self.stdout.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
