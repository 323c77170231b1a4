import pytest
from rest_framework.test import APIClient

from .utils import token_authenticate


@pytest.fixture(autouse=True)
def no_more_mark_django_db(db):
    pass


@pytest.fixture
def api_client():
    return APIClient()


@pytest.fixture
def user_api_client(api_client, user):
    token_authenticate(api_client, user)
    return api_client


@pytest.fixture
def staff_api_client(api_client, staff_user):
    token_authenticate(api_client, staff_user)
    return api_client


@pytest.fixture
def admin_api_client(api_client, admin_user):
    token_authenticate(api_client, admin_user)
    return api_client
