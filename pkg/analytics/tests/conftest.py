import pytest
from django.conf import settings as django_settings
from pytest_factoryboy import register

from analytics.coordinator.mock import MockCoordinator
from analytics.factories import AnalysisRunFactory, StageRecordFactory, UserFactory
from analytics.knowledge import load_knowledge
from analytics.pipeline.dataset import generate_dataset
from analytics.tools import builtin_registry

from .utils import AML_TRANSACTIONS, AML_USERS

register(AnalysisRunFactory)
register(StageRecordFactory)
register(UserFactory)
register(UserFactory, 'staff_user', is_staff=True)
register(UserFactory, 'admin_user', is_staff=True, is_superuser=True)


@pytest.fixture(autouse=True)
def set_faker_random_seed():
    from analytics.factories.faker import fake
    fake.seed_instance(777)


@pytest.fixture(autouse=True)
def runs_root(settings, tmp_path):
    settings.AAG_RUNS_ROOT = str(tmp_path / 'runs')
    return settings.AAG_RUNS_ROOT


@pytest.fixture
def kg():
    return load_knowledge(django_settings.AAG_KNOWLEDGE_PATH)


@pytest.fixture
def registry():
    return builtin_registry()


@pytest.fixture
def coordinator():
    return MockCoordinator()


@pytest.fixture(scope='session')
def aml_dataset(tmp_path_factory):
    """
    A small generated money-flow dataset: ``(data_dir, manifest)``.
    """
    data_dir = str(tmp_path_factory.mktemp('aml'))
    manifest = generate_dataset(data_dir, n_users=AML_USERS, n_txns=AML_TRANSACTIONS)
    return data_dir, manifest
