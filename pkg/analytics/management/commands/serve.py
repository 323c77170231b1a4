import signal

from django.conf import settings

from analytics.management.base import AnalyticsCommand
from analytics.tools import builtin_registry
from analytics.tools.rpc import RpcDispatcher, serve_stdio, start_socket_server


class Command(AnalyticsCommand):
    help = 'Serve the tool registry over newline-delimited JSON-RPC'

    def add_arguments(self, parser):
        transport = parser.add_mutually_exclusive_group()
        transport.add_argument('--socket', help='Unix domain socket path')
        transport.add_argument('--stdio', action='store_true', help='read requests from stdin (default)')
        parser.add_argument('--width', type=int, default=None)

    def handle(self, *args, **options):
        dispatcher = RpcDispatcher(builtin_registry())
        if not options['socket']:
            serve_stdio(dispatcher, width=options['width'] or settings.AAG_WIDTH)
            return
        handle = start_socket_server(dispatcher, options['socket'])
        signal.signal(signal.SIGTERM, lambda *_: handle.server.shutdown())
        self.stderr.write('listening on %s' % options['socket'])
        try:
            handle.wait()
        except KeyboardInterrupt:
            pass
        finally:
            handle.stop()
