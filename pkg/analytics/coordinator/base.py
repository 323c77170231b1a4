import json
import logging

from django.conf import settings
from rest_framework import serializers

from analytics.exceptions import BudgetExceeded, SchemaValidationFailed
from analytics.tools.results import canonical_json

from .schemas import PLAN, REFINE, REPORT, ROLES, SCHEMA, validate_response  # noqa

logger = logging.getLogger(__name__)

DEFAULT_CONTEXT_BUDGET = 16000
MAX_ATTEMPTS = 2


def context_budget():
    return getattr(settings, 'AAG_CONTEXT_BUDGET', DEFAULT_CONTEXT_BUDGET)


class CoordinatorRequest(object):
    def __init__(self, role, payload, schema_id=None):
        if role not in ROLES:
            raise ValueError('unknown coordinator role %r' % (role,))
        self.role = role
        self.payload = payload
        self.schema_id = schema_id or '%s.v1' % role.lower()

    def encoded(self):
        return canonical_json(self.payload)

    def check_budget(self, budget):
        size = len(self.encoded())
        if size > budget:
            raise BudgetExceeded('%s request of %d chars exceeds the context budget of %d'
                                 % (self.role, size, budget), size=size, budget=budget)

    def to_data(self):
        return {'role': self.role, 'schema': self.schema_id, 'payload': self.payload}


class CoordinatorResponse(object):
    """
    A schema-valid coordinator answer and the transcript of every attempt.
    """

    def __init__(self, role, value, transcripts):
        self.role = role
        self.value = value
        self.transcripts = list(transcripts)

    @property
    def attempts(self):
        return len(self.transcripts)

    def to_data(self):
        return {'role': self.role, 'value': self.value, 'transcripts': self.transcripts}


def _error_text(detail):
    return json.dumps(detail, sort_keys=True, default=str)


class Coordinator(object):
    """
    The decision boundary of the engine. Subclasses implement ``attempt``; the
    budget check, schema validation and the single retry live here.
    """

    name = None
    budget = None

    def attempt(self, request, previous_error=None):
        """
        Return ``(value, transcript)`` for one try at ``request``.
        """
        raise NotImplementedError

    def complete(self, request):
        request.check_budget(self.budget or context_budget())
        transcripts = []
        error = None
        for attempt in range(MAX_ATTEMPTS):
            value, transcript = self.attempt(request, error)
            transcripts.append(transcript)
            try:
                validated = validate_response(request.role, value)
            except serializers.ValidationError as e:
                error = _error_text(e.detail)
                logger.info('%s coordinator: %s response rejected on attempt %d: %s',
                            self.name, request.role, attempt + 1, error)
                continue
            return CoordinatorResponse(request.role, validated, transcripts)
        raise SchemaValidationFailed(
            '%s response failed schema %s after %d attempts: %s' % (request.role, request.schema_id,
                                                                    MAX_ATTEMPTS, error),
            transcripts,
        )


def get_coordinator(name, **options):
    if name == 'mock':
        from .mock import MockCoordinator
        return MockCoordinator()
    if name == 'remote':
        from .remote import RemoteCoordinator
        return RemoteCoordinator.from_settings(**options)
    raise ValueError('unknown coordinator %r' % (name,))
