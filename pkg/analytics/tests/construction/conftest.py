import pytest

from analytics.construction import extract, load_catalog, read_sources
from analytics.construction.schema import TEMPLATE_MONEY_FLOW, schema_from_template

from ..utils import write_dataset

ACCOUNTS = [(1, 'Anna Lee'), (2, 'Bo Chen'), (3, 'Cy Diaz'), (4, 'Dee Ek')]
TRANSFERS = [
    (1, 1, 2, '15000.00', '2024-01-01T10:00:00Z'),
    (2, 2, 3, '12000.50', '2024-01-02T10:00:00Z'),
    (3, 3, 1, '11000.00', '2024-01-03T10:00:00Z'),
    (4, 1, 2, '20.00', '2024-01-04T10:00:00Z'),
    (5, 4, 'x', '5.00', '2024-01-05T10:00:00Z'),
    (6, 2, 4, 'abc', '2024-01-06T10:00:00Z'),
    (7, 3, 4, '7.50', 'not-a-date'),
]


@pytest.fixture
def data_dir(tmp_path):
    return write_dataset(str(tmp_path / 'data'), ACCOUNTS, TRANSFERS)


@pytest.fixture
def catalog(data_dir):
    return load_catalog(data_dir)


@pytest.fixture
def schema(catalog):
    return schema_from_template(TEMPLATE_MONEY_FLOW, catalog).validate(catalog)


@pytest.fixture
def pg(catalog, schema):
    return extract(read_sources(catalog, schema), schema, catalog)
