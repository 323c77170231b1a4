from analytics.tools.results import canonical_json

from .base import Coordinator
from .rules import RULES, RULES_VERSION


class MockCoordinator(Coordinator):
    """
    Deterministic coordinator answering from the versioned rule table.
    """

    name = 'mock'

    def attempt(self, request, previous_error=None):
        value = RULES[request.role](request.payload)
        transcript = {
            'coordinator': self.name,
            'rules_version': RULES_VERSION,
            'request': request.to_data(),
            'response': value,
        }
        if previous_error is not None:
            transcript['previous_error'] = previous_error
        return value, canonical_json(transcript)
