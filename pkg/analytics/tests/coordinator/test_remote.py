import json

import pytest
import requests

from analytics.coordinator import REPORT, CoordinatorRequest
from analytics.coordinator.remote import RemoteCoordinator, load_prompt
from analytics.exceptions import ConfigError, SchemaValidationFailed, TransportError

VALID_REPORT = {'summary': 'nothing found', 'sections': []}


class FakeResponse(object):
    def __init__(self, status_code=200, data=None):
        self.status_code = status_code
        self.data = data

    def json(self):
        if self.data is None:
            raise ValueError('no JSON body')
        return self.data


def completion(content):
    return FakeResponse(data={'choices': [{'message': {'content': content}}]})


@pytest.fixture
def posts(monkeypatch):
    """
    Queue of fake responses for ``requests.post``; every call is recorded in ``posts.calls``.
    """
    class Posts(list):
        calls = []

    queue = Posts()

    def post(url, **kwargs):
        queue.calls.append(dict(kwargs, url=url))
        answer = queue.pop(0)
        if isinstance(answer, Exception):
            raise answer
        return answer

    monkeypatch.setattr('analytics.coordinator.remote.requests.post', post)
    return queue


@pytest.fixture
def remote():
    return RemoteCoordinator('http://coordinator.test/v1/', 'test-model', 'secret', timeout=5)


def test_from_settings(settings, monkeypatch):
    settings.AAG_COORDINATOR = {'base_url': 'http://settings.test/v1', 'api_key_env': 'TEST_COORDINATOR_KEY'}
    monkeypatch.setenv('TEST_COORDINATOR_KEY', 'k')
    coordinator = RemoteCoordinator.from_settings(model='other-model', timeout=None)
    assert (coordinator.base_url, coordinator.model, coordinator.api_key) == (
        'http://settings.test/v1', 'other-model', 'k')
    assert coordinator.timeout == 60
    monkeypatch.delenv('TEST_COORDINATOR_KEY')
    with pytest.raises(ConfigError):
        RemoteCoordinator.from_settings()


def test_prompt_names_schema_fields(remote):
    messages = remote.messages(CoordinatorRequest(REPORT, {'query': 'q'}))
    assert [m['role'] for m in messages] == ['system', 'user']
    assert '(report.v1) with the fields: directives, sections, summary.' in messages[0]['content']
    assert messages[1]['content'] == '{"query":"q"}'


def test_missing_prompt():
    with pytest.raises(ConfigError):
        load_prompt('chat.v1')


def test_complete(remote, posts):
    posts.append(completion(json.dumps(VALID_REPORT)))
    response = remote.complete(CoordinatorRequest(REPORT, {'query': 'q'}))
    assert response.value['summary'] == 'nothing found'
    call = posts.calls[0]
    assert call['url'] == 'http://coordinator.test/v1/chat/completions'
    assert call['headers'] == {'Authorization': 'Bearer secret'}
    assert call['timeout'] == 5
    assert (call['json']['model'], call['json']['temperature']) == ('test-model', 0)
    assert json.loads(response.transcripts[0])['response'] == json.dumps(VALID_REPORT)


def test_unparsable_answer_is_retried_with_the_error(remote, posts):
    posts.extend([completion('I think the answer is yes'), completion(json.dumps(VALID_REPORT))])
    response = remote.complete(CoordinatorRequest(REPORT, {'query': 'q'}))
    assert response.attempts == 2
    retry = posts.calls[1]['json']['messages']
    assert len(retry) == 3
    assert retry[2]['content'].startswith('Your previous answer did not validate against report.v1')


def test_two_unparsable_answers(remote, posts):
    posts.extend([completion('yes'), completion('{"summary": ""}')])
    with pytest.raises(SchemaValidationFailed):
        remote.complete(CoordinatorRequest(REPORT, {'query': 'q'}))


@pytest.mark.parametrize('answer', [
    FakeResponse(status_code=503),
    FakeResponse(data={'choices': []}),
    FakeResponse(),
    requests.ConnectionError('refused'),
])
def test_transport_errors(remote, posts, answer):
    posts.append(answer)
    with pytest.raises(TransportError) as excinfo:
        remote.complete(CoordinatorRequest(REPORT, {'query': 'q'}))
    assert excinfo.value.exit_code == 3
