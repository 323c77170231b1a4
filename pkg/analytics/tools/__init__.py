from .descriptors import InputSlot, ParamSpec, ToolDescriptor  # noqa
from .distill import DistillDirective, DistilledResult, default_directive, distill  # noqa
from .kinds import CYCLE_SET, GRAPH, KINDS, NODE_SCORES, NODE_SET, SCALAR, TABLE, kind_of  # noqa
from .registry import ToolRegistry, builtin_registry  # noqa
from .results import InvocationRequest, RawResult  # noqa
