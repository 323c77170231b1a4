import pytest
from django.urls import reverse

from analytics.tools import builtin_registry

from ..utils import ALL_METHODS, check_method_status_codes, get, post

list_url = reverse('internal:v1:tool-list')
TRIANGLE = {'kind': 'Graph', 'edges': [['a', 'b', 5.0], ['b', 'c', 7.0], ['c', 'a', 2.0]]}


def get_detail_url(name):
    return reverse('internal:v1:tool-detail', kwargs={'name': name})


def get_invoke_url(name):
    return reverse('internal:v1:tool-invoke', kwargs={'name': name})


def test_list_tools(staff_api_client):
    data = get(staff_api_client, list_url)
    assert [tool['name'] for tool in data] == builtin_registry().names()


def test_describe_tool(staff_api_client):
    data = get(staff_api_client, get_detail_url('enumerate_cycles'))
    assert data['output_kind'] == 'CycleSet'
    assert data['inputs'][0]['constraints'] == ['directed']
    get(staff_api_client, get_detail_url('betweenness'), status_code=404)


def test_invoke_tool(staff_api_client):
    body = {'inputs': {'graph': TRIANGLE}, 'params': {'min_len': 3}, 'directive': {'mode': 'SubgraphSummary'}}
    data = post(staff_api_client, get_invoke_url('enumerate_cycles'), body)
    assert data['kind'] == 'CycleSet'
    assert data['stats']['item_count'] == 1
    assert data['distilled']['items'] == [{'cycle': ['a', 'b', 'c'], 'length': 3, 'bottleneck': 2.0, 'total': 14.0}]


@pytest.mark.parametrize('name,body,status_code,code', [
    ('pagerank', {'inputs': {'graph': TRIANGLE}, 'params': {'damping': 2}}, 422, 1002),
    ('enumerate_cycles', {'inputs': {'graph': dict(TRIANGLE, directed=False)}}, 422, 1003),
    ('pagerank', {'inputs': [TRIANGLE]}, 400, -32602),
    ('pagerank', {'inputs': {'graph': TRIANGLE}, 'directive': {'mode': 'Threshold'}}, 400, -32602),
])
def test_invoke_errors(staff_api_client, name, body, status_code, code):
    data = post(staff_api_client, get_invoke_url(name), body, status_code=status_code)
    assert data['code'] == code
    assert data['message']


def test_invoke_unknown_tool(staff_api_client):
    post(staff_api_client, get_invoke_url('betweenness'), {}, status_code=404)


def test_disallowed_methods(staff_api_client):
    check_method_status_codes(staff_api_client, (list_url,), ('post', 'put', 'patch', 'delete'), 405)
    check_method_status_codes(staff_api_client, (get_invoke_url('pagerank'),), ('get', 'put', 'patch', 'delete'), 405)


def test_other_than_staff_cannot_do_anything(api_client, user_api_client):
    urls = (list_url, get_detail_url('pagerank'), get_invoke_url('pagerank'))
    check_method_status_codes(user_api_client, urls, ALL_METHODS, 403)
    api_client.credentials()
    check_method_status_codes(api_client, urls, ALL_METHODS, 401)
