"""
Coordinator backed by a chat-completion compatible HTTP endpoint.
"""
import json
import logging
import os

import requests
from django.conf import settings
from django.template import Context, Template

from analytics.exceptions import ConfigError, TransportError
from analytics.tools.results import canonical_json

from .base import Coordinator
from .schemas import describe_schema

logger = logging.getLogger(__name__)

PROMPTS_DIR = os.path.join(os.path.dirname(__file__), 'prompts')

DEFAULT_OPTIONS = {
    'base_url': 'https://api.openai.com/v1',
    'model': 'gpt-4o-mini',
    'api_key_env': 'AAG_COORDINATOR_API_KEY',
    'timeout': 60,
}


def load_prompt(schema_id):
    path = os.path.join(PROMPTS_DIR, '%s.txt' % schema_id)
    try:
        with open(path, encoding='utf-8') as fp:
            return Template(fp.read())
    except FileNotFoundError:
        raise ConfigError('no prompt template for %s' % (schema_id,))


class RemoteCoordinator(Coordinator):
    name = 'remote'

    def __init__(self, base_url, model, api_key, timeout=DEFAULT_OPTIONS['timeout']):
        self.base_url = base_url.rstrip('/')
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    @classmethod
    def from_settings(cls, **options):
        config = dict(DEFAULT_OPTIONS, **getattr(settings, 'AAG_COORDINATOR', {}))
        config.update({key: value for key, value in options.items() if value is not None})
        api_key = os.environ.get(config['api_key_env'])
        if not api_key:
            raise ConfigError('the remote coordinator needs an API key in $%s' % config['api_key_env'])
        return cls(config['base_url'], config['model'], api_key, config['timeout'])

    def messages(self, request, previous_error=None):
        prompt = load_prompt(request.schema_id).render(Context({
            'role': request.role,
            'schema_id': request.schema_id,
            'fields': describe_schema(request.role),
        }, autoescape=False))
        messages = [
            {'role': 'system', 'content': prompt.strip()},
            {'role': 'user', 'content': request.encoded()},
        ]
        if previous_error is not None:
            messages.append({
                'role': 'user',
                'content': 'Your previous answer did not validate against %s: %s\nAnswer again with JSON only.'
                           % (request.schema_id, previous_error),
            })
        return messages

    def post(self, messages):
        try:
            response = requests.post(
                '%s/chat/completions' % self.base_url,
                json={
                    'model': self.model,
                    'messages': messages,
                    'temperature': 0,
                    'response_format': {'type': 'json_object'},
                },
                headers={'Authorization': 'Bearer %s' % self.api_key},
                timeout=self.timeout,
            )
        except requests.RequestException as e:
            raise TransportError('coordinator endpoint unreachable: %s' % e) from e
        if response.status_code >= 400:
            raise TransportError('coordinator endpoint answered %d' % response.status_code,
                                 status=response.status_code)
        try:
            return response.json()['choices'][0]['message']['content']
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise TransportError('malformed chat completion: %s' % e) from e

    def attempt(self, request, previous_error=None):
        messages = self.messages(request, previous_error)
        content = self.post(messages)
        logger.debug('%s answer of %d chars from %s', request.role, len(content or ''), self.model)
        try:
            value = json.loads(content)
        except (TypeError, ValueError):
            # left to schema validation, which rejects it and retries
            value = content
        transcript = canonical_json({
            'coordinator': self.name,
            'model': self.model,
            'messages': messages,
            'response': content,
        })
        return value, transcript
