import json

import pytest

from analytics.coordinator import PLAN, REPORT, Coordinator, CoordinatorRequest, get_coordinator
from analytics.coordinator.mock import MockCoordinator
from analytics.coordinator.rules import RULES_VERSION
from analytics.exceptions import BudgetExceeded, ConfigError, SchemaValidationFailed

VALID_REPORT = {'summary': 'nothing found', 'sections': []}


class ScriptedCoordinator(Coordinator):
    name = 'scripted'

    def __init__(self, *answers):
        self.answers = list(answers)
        self.errors = []

    def attempt(self, request, previous_error=None):
        self.errors.append(previous_error)
        return self.answers.pop(0), 'attempt %d' % len(self.errors)


def test_request_roles():
    request = CoordinatorRequest(PLAN, {'query': 'q'})
    assert request.schema_id == 'plan.v1'
    assert request.encoded() == '{"query":"q"}'
    with pytest.raises(ValueError):
        CoordinatorRequest('Chat', {})


def test_valid_first_answer():
    response = ScriptedCoordinator(VALID_REPORT).complete(CoordinatorRequest(REPORT, {}))
    assert response.value == dict(VALID_REPORT, directives={})
    assert response.attempts == 1


def test_invalid_answer_is_retried_once():
    coordinator = ScriptedCoordinator({'summary': ''}, VALID_REPORT)
    response = coordinator.complete(CoordinatorRequest(REPORT, {}))
    assert response.transcripts == ['attempt 1', 'attempt 2']
    assert coordinator.errors[0] is None
    assert 'summary' in coordinator.errors[1]


def test_second_invalid_answer_fails():
    coordinator = ScriptedCoordinator('not json', {'sections': 'none'})
    with pytest.raises(SchemaValidationFailed) as excinfo:
        coordinator.complete(CoordinatorRequest(REPORT, {}))
    assert excinfo.value.transcripts == ['attempt 1', 'attempt 2']
    assert excinfo.value.details == {'attempts': 2}
    assert excinfo.value.exit_code == 2


def test_budget_is_checked_before_any_attempt(settings):
    settings.AAG_CONTEXT_BUDGET = 20
    coordinator = ScriptedCoordinator(VALID_REPORT)
    with pytest.raises(BudgetExceeded) as excinfo:
        coordinator.complete(CoordinatorRequest(REPORT, {'query': 'a rather long question'}))
    assert excinfo.value.details == {'size': 34, 'budget': 20}
    assert coordinator.errors == []


def test_mock_transcript():
    response = MockCoordinator().complete(CoordinatorRequest(PLAN, {'query': 'rank accounts', 'datasets': {'t': {}}}))
    transcript = json.loads(response.transcripts[0])
    assert transcript['coordinator'] == 'mock'
    assert transcript['rules_version'] == RULES_VERSION
    assert transcript['request']['schema'] == 'plan.v1'
    assert response.value['stages'][0]['id'] == 'ranking'


def test_get_coordinator(monkeypatch):
    assert isinstance(get_coordinator('mock'), MockCoordinator)
    with pytest.raises(ValueError):
        get_coordinator('oracle')
    monkeypatch.delenv('AAG_COORDINATOR_API_KEY', raising=False)
    with pytest.raises(ConfigError):
        get_coordinator('remote')
