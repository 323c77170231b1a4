from .dag import (  # noqa
    Binding, Gate, Intent, ReportSink, TaskDag, TaskNode, topological_order
)
from .validation import Violation, validate_dag  # noqa
