import json
import os

import pytest

from analytics.construction import SourceCatalog, load_catalog
from analytics.construction.catalog import FLOAT, ROLE_WEIGHT
from analytics.exceptions import CatalogMismatch, ConfigError


def test_load_catalog(catalog, data_dir):
    assert [source.id for source in catalog] == ['accounts', 'transactions']
    transactions = catalog.get('transactions')
    assert transactions.path == os.path.join(data_dir, 'transactions.csv')
    assert transactions.row_count == 7
    assert transactions.column('amount').type == FLOAT
    assert [c.name for c in transactions.columns_with_role(ROLE_WEIGHT)] == ['amount']


def test_catalog_to_data_uses_file_names(catalog):
    data = catalog.to_data()
    assert [s['path'] for s in data['sources']] == ['accounts.csv', 'transactions.csv']
    assert SourceCatalog.from_data(data).to_data() == data


def test_unknown_source_and_column(catalog):
    with pytest.raises(CatalogMismatch) as excinfo:
        catalog.get('merchants')
    assert excinfo.value.details['source'] == 'merchants'
    with pytest.raises(CatalogMismatch) as excinfo:
        catalog.get('accounts').column('email')
    assert excinfo.value.details == {'column': 'email', 'source': 'accounts'}


def test_missing_catalog(tmp_path):
    with pytest.raises(ConfigError):
        load_catalog(str(tmp_path))


def test_catalog_is_not_json(tmp_path):
    (tmp_path / 'catalog.json').write_text('{"sources": [')
    with pytest.raises(ConfigError):
        load_catalog(str(tmp_path))


def column(name, type='Int', role=None):
    return {'name': name, 'type': type, 'role': role}


@pytest.mark.parametrize('data', [
    {},
    {'sources': []},
    {'sources': [{'id': 'a', 'path': 'a.csv', 'columns': [column('x'), column('x')]}]},
    {'sources': [{'id': 'a', 'path': 'a.csv', 'columns': [column('x', type='Decimal')]}]},
    {'sources': [{'id': 'a', 'path': 'a.csv', 'columns': [column('x', role='owner')]}]},
    {'sources': [{'id': 'a', 'path': 'a.csv', 'columns': []}] * 2},
    {'sources': [{'id': 'a', 'path': 'a.csv', 'row_count': -1, 'columns': [column('x')]}]},
])
def test_invalid_catalog(data):
    with pytest.raises(ConfigError):
        SourceCatalog.from_data(data)


def test_invalid_catalog_message_lists_errors(tmp_path):
    (tmp_path / 'catalog.json').write_text(json.dumps({'sources': [{'id': 'a', 'columns': []}]}))
    with pytest.raises(ConfigError) as excinfo:
        load_catalog(str(tmp_path))
    assert 'path' in excinfo.value.message
