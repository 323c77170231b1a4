import logging
import threading

from analytics.exceptions import DuplicateTool, ExecutorError, KindMismatch, ToolError, UnknownTool

from .kinds import kind_of
from .results import RawResult

logger = logging.getLogger(__name__)


class ToolRegistry(object):
    """
    Catalog of tool descriptors and their executors.

    Registration happens at startup; afterwards the registry is only read and
    invocations may run concurrently.
    """

    def __init__(self):
        self._tools = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._tools)

    def __contains__(self, name):
        return name in self._tools

    def register(self, descriptor, executor):
        descriptor.check()
        with self._lock:
            if descriptor.name in self._tools:
                raise DuplicateTool('tool %r is already registered' % descriptor.name)
            self._tools[descriptor.name] = (descriptor, executor)
        logger.debug('registered tool %s (%s)', descriptor.name, descriptor.family)

    def names(self):
        return sorted(self._tools)

    def descriptor(self, name):
        try:
            return self._tools[name][0]
        except KeyError:
            raise UnknownTool('no tool named %r' % (name,), tool=name)

    def describe(self, name):
        return self.descriptor(name).to_data()

    def describe_all(self):
        return [self._tools[name][0].to_data() for name in self.names()]

    def invoke(self, request):
        descriptor = self.descriptor(request.tool)
        executor = self._tools[request.tool][1]
        descriptor.validate_inputs(request.inputs)
        params = descriptor.validate_params(request.params)
        try:
            payload = executor(request.inputs, params)
        except ToolError:
            raise
        except Exception as e:
            logger.info('%s failed: %s: %s', request.tool, e.__class__.__name__, e)
            raise ExecutorError(request.tool, e) from e
        kind = kind_of(payload)
        if kind != descriptor.output_kind:
            raise ExecutorError(request.tool, KindMismatch('executor returned %s, not %s'
                                                           % (kind, descriptor.output_kind)))
        return RawResult(kind, payload, tool=request.tool)


def builtin_registry():
    from .builtins import BUILTIN_TOOLS

    registry = ToolRegistry()
    for descriptor, executor in BUILTIN_TOOLS:
        registry.register(descriptor, executor)
    return registry
