"""
Error hierarchy of the analytics engine.

Errors are grouped by the exit code family they map to on the command line:
planning errors exit with 2, execution errors with 3, config/data errors with 4.
Tool errors additionally carry a JSON-RPC application code.
"""

EXIT_PLANNING = 2
EXIT_EXECUTION = 3
EXIT_CONFIG = 4


class AnalyticsError(Exception):
    exit_code = EXIT_EXECUTION

    def __init__(self, message='', **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self):
        data = {'error': self.__class__.__name__, 'message': self.message}
        if self.details:
            data['details'] = self.details
        return data


class PlanningError(AnalyticsError):
    exit_code = EXIT_PLANNING


class ExecutionError(AnalyticsError):
    exit_code = EXIT_EXECUTION


class DataError(AnalyticsError):
    exit_code = EXIT_CONFIG


class ConfigError(DataError):
    pass


##################
# Knowledge base #
##################

class ParseError(DataError):
    pass


class HierarchyError(DataError):
    def __init__(self, message, node_id=None, **details):
        super().__init__(message, node_id=node_id, **details)
        self.node_id = node_id


class UnknownNode(AnalyticsError):
    def __init__(self, node_id):
        super().__init__('unknown knowledge node %r' % (node_id,), node_id=node_id)
        self.node_id = node_id


class LevelError(AnalyticsError):
    pass


class DuplicateId(AnalyticsError):
    pass


class EmptyKnowledgeBase(PlanningError):
    pass


############
# Planning #
############

class PlanningFailed(PlanningError):
    pass


class NoToolForStage(PlanningError):
    def __init__(self, stage, candidates=()):
        super().__init__(
            'no registered tool can execute stage %r' % (stage,),
            stage=stage, candidates=list(candidates),
        )
        self.stage = stage
        self.candidates = list(candidates)


class CyclicDag(PlanningError):
    pass


class RefinementExhausted(ExecutionError):
    def __init__(self, message, feedback=()):
        super().__init__(message, feedback=[f.as_dict() for f in feedback])
        self.feedback = list(feedback)


#################
# Tool registry #
#################

class ToolError(ExecutionError):
    rpc_code = 1004


class DuplicateTool(AnalyticsError):
    pass


class DescriptorInvalid(AnalyticsError):
    pass


class UnknownTool(ToolError):
    rpc_code = 1001


class SchemaViolation(ToolError):
    rpc_code = 1002

    def __init__(self, message, field=None, expected=None, given=None):
        super().__init__(message, field=field, expected=expected, given=given)
        self.field = field


class ConstraintViolation(ToolError):
    rpc_code = 1003


class ExecutorError(ToolError):
    rpc_code = 1004

    def __init__(self, tool_name, cause):
        super().__init__(
            '%s failed: %s' % (tool_name, cause),
            tool=tool_name, cause=cause.__class__.__name__,
        )
        self.tool_name = tool_name
        self.cause = cause


class ModeMismatch(AnalyticsError):
    pass


class TransportError(ExecutionError):
    pass


######################
# Graph construction #
######################

class SchemaInferenceFailed(DataError):
    pass


class CatalogMismatch(DataError):
    def __init__(self, message, column=None, source=None):
        super().__init__(message, column=column, source=source)
        self.column = column


class ExtractionError(DataError):
    pass


class UnknownRelation(AnalyticsError):
    pass


class ProjectionMismatch(AnalyticsError):
    pass


class KindMismatch(AnalyticsError):
    pass


####################
# Graph algorithms #
####################

class EmptyGraph(AnalyticsError):
    pass


class EmptySeedSet(AnalyticsError):
    pass


class InvalidNode(AnalyticsError):
    pass


class ParameterOutOfRange(AnalyticsError):
    def __init__(self, message, param=None):
        super().__init__(message, param=param)
        self.param = param


class LengthBoundError(ParameterOutOfRange):
    def __init__(self, message, param='max_len'):
        super().__init__(message, param=param)


class MissingWeightColumn(AnalyticsError):
    pass


###############
# Coordinator #
###############

class SchemaValidationFailed(PlanningError):
    def __init__(self, message, transcripts=()):
        super().__init__(message, attempts=len(transcripts))
        self.transcripts = list(transcripts)


class BudgetExceeded(AnalyticsError):
    pass


############
# Pipeline #
############

class SpecInfeasible(DataError):
    pass


class PipelineError(AnalyticsError):
    """
    Wrap a module error with the pipeline stage it surfaced in.
    """

    def __init__(self, stage, cause):
        super().__init__('%s: %s' % (stage, cause), stage=stage)
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, 'exit_code', EXIT_EXECUTION)

    def as_dict(self):
        data = super().as_dict()
        data['cause'] = self.cause.as_dict() if isinstance(self.cause, AnalyticsError) else {
            'error': self.cause.__class__.__name__, 'message': str(self.cause),
        }
        return data
