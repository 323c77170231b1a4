"""
Newline-delimited JSON-RPC 2.0 server exposing the tool registry.

Methods: ``tools/list``, ``tools/describe`` and ``tools/invoke``. Each line in
is one request object; each line out is one response object, canonically
encoded (sorted keys, no whitespace).
"""
import json
import logging
import os
import socketserver
import sys
import threading
from concurrent.futures import ThreadPoolExecutor

from rest_framework import serializers

from analytics.exceptions import AnalyticsError, ToolError, TransportError

from .codec import decode_value
from .distill import DistillDirective, default_directive, distill
from .results import InvocationRequest, canonical_json

logger = logging.getLogger(__name__)

JSONRPC_VERSION = '2.0'

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603


class RpcError(Exception):
    def __init__(self, code, message, data=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.data = data


def invocation_result(raw, directive=None):
    """
    The payload ``tools/invoke`` answers with: raw stats plus a distilled view.
    """
    distilled = distill(raw, directive or default_directive(raw.kind))
    return {'kind': raw.kind, 'stats': raw.stats, 'distilled': distilled.to_data()}


def invoke_from_data(registry, data):
    if not isinstance(data, dict) or not isinstance(data.get('name'), str):
        raise RpcError(INVALID_PARAMS, 'Invalid params: "name" is required')
    inputs = data.get('inputs', {})
    params = data.get('params', {})
    if not isinstance(inputs, dict) or not isinstance(params, dict):
        raise RpcError(INVALID_PARAMS, 'Invalid params: "inputs" and "params" must be objects')
    registry.descriptor(data['name'])
    directive = None
    if data.get('directive') is not None:
        try:
            directive = DistillDirective.from_data(data['directive'])
        except serializers.ValidationError as e:
            raise RpcError(INVALID_PARAMS, 'Invalid params: bad directive', e.detail)
    decoded = {slot: decode_value(value, field=slot) for slot, value in sorted(inputs.items())}
    raw = registry.invoke(InvocationRequest(data['name'], decoded, params))
    return invocation_result(raw, directive)


class RpcDispatcher(object):
    def __init__(self, registry):
        self.registry = registry
        self.methods = {
            'tools/list': self.tools_list,
            'tools/describe': self.tools_describe,
            'tools/invoke': self.tools_invoke,
        }

    def tools_list(self, params):
        return {'tools': self.registry.describe_all()}

    def tools_describe(self, params):
        if not isinstance(params.get('name'), str):
            raise RpcError(INVALID_PARAMS, 'Invalid params: "name" is required')
        return self.registry.describe(params['name'])

    def tools_invoke(self, params):
        return invoke_from_data(self.registry, params)

    def handle(self, message):
        if not isinstance(message, dict):
            return _error(None, INVALID_REQUEST, 'Invalid Request')
        request_id = message.get('id')
        if message.get('jsonrpc') != JSONRPC_VERSION or not isinstance(message.get('method'), str):
            return _error(request_id, INVALID_REQUEST, 'Invalid Request')
        if 'id' not in message:
            return _error(None, INVALID_REQUEST, 'Invalid Request: missing id')
        method = self.methods.get(message['method'])
        if method is None:
            return _error(request_id, METHOD_NOT_FOUND, 'Method not found: %s' % message['method'])
        params = message.get('params', {})
        if not isinstance(params, dict):
            return _error(request_id, INVALID_PARAMS, 'Invalid params: expected an object')
        try:
            result = method(params)
        except RpcError as e:
            return _error(request_id, e.code, e.message, e.data)
        except ToolError as e:
            return _error(request_id, e.rpc_code, e.message, e.as_dict())
        except AnalyticsError as e:
            return _error(request_id, INVALID_PARAMS, e.message, e.as_dict())
        except Exception:
            logger.exception('internal error answering %s', message['method'])
            return _error(request_id, INTERNAL_ERROR, 'Internal error')
        return {'jsonrpc': JSONRPC_VERSION, 'id': request_id, 'result': result}

    def handle_line(self, line):
        """
        Answer one frame; blank lines get no answer.
        """
        if not line.strip():
            return None
        try:
            message = json.loads(line)
        except ValueError:
            return canonical_json(_error(None, PARSE_ERROR, 'Parse error'))
        return canonical_json(self.handle(message))


def _error(request_id, code, message, data=None):
    error = {'code': code, 'message': message}
    if data is not None:
        error['data'] = data
    return {'jsonrpc': JSONRPC_VERSION, 'id': request_id, 'error': error}


##############
# Transports #
##############

def serve_stdio(dispatcher, stdin=None, stdout=None, width=4):
    """
    Answer frames from ``stdin`` until EOF. Requests run on a thread pool; writes
    are serialized so frames never interleave.
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    write_lock = threading.Lock()

    def answer(line):
        response = dispatcher.handle_line(line)
        if response is not None:
            with write_lock:
                stdout.write(response + '\n')
                stdout.flush()

    try:
        with ThreadPoolExecutor(max_workers=width) as pool:
            for line in stdin:
                pool.submit(answer, line)
    except (OSError, ValueError) as e:
        raise TransportError('stdio transport failed: %s' % e)


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            response = self.server.dispatcher.handle_line(raw.decode('utf-8', errors='replace'))
            if response is not None:
                self.wfile.write((response + '\n').encode('utf-8'))
                self.wfile.flush()


class _SocketServer(socketserver.ThreadingUnixStreamServer):
    daemon_threads = True

    def __init__(self, path, dispatcher):
        self.dispatcher = dispatcher
        super().__init__(path, _LineHandler)


class ServerHandle(object):
    def __init__(self, server, thread, path):
        self.server = server
        self.thread = thread
        self.path = path

    def wait(self):
        self.thread.join()

    def stop(self):
        self.server.shutdown()
        self.server.server_close()
        if os.path.exists(self.path):
            os.unlink(self.path)
        logger.info('socket server on %s stopped', self.path)


def start_socket_server(dispatcher, path):
    if os.path.exists(path):
        raise TransportError('socket path %s is already in use' % path)
    try:
        server = _SocketServer(path, dispatcher)
    except OSError as e:
        raise TransportError('cannot listen on %s: %s' % (path, e))
    thread = threading.Thread(target=server.serve_forever, name='rpc-%s' % os.path.basename(path), daemon=True)
    thread.start()
    logger.info('serving %d tools on %s', len(dispatcher.registry), path)
    return ServerHandle(server, thread, path)
