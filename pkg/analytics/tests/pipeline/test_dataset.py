import os

import pandas as pd
import pytest

from analytics.exceptions import ConfigError, SpecInfeasible
from analytics.pipeline import CycleSpec, generate_dataset, load_manifest, parse_cycle_specs


@pytest.fixture
def small(tmp_path):
    data_dir = str(tmp_path / 'data')
    return data_dir, generate_dataset(data_dir, n_users=30, n_txns=200, planted=[CycleSpec(3), CycleSpec(4)])


def test_files_are_written(small):
    data_dir, manifest = small
    assert sorted(os.listdir(data_dir)) == ['accounts.csv', 'catalog.json', 'manifest.json', 'transactions.csv']
    accounts = pd.read_csv(os.path.join(data_dir, 'accounts.csv'))
    transactions = pd.read_csv(os.path.join(data_dir, 'transactions.csv'))
    assert len(accounts) == 30
    assert len(transactions) == 200
    assert transactions['txn_id'].tolist() == list(range(1, 201))
    assert (transactions['src_account'] != transactions['dst_account']).all()
    focus = manifest['focus']
    assert focus['name'] == 'Anna Lee'
    assert accounts.loc[accounts['account_id'] == focus['account_id'], 'name'].tolist() == ['Anna Lee']
    assert (accounts['name'] == 'Anna Lee').sum() == 1


def test_manifest_lists_planted_cycles(small):
    data_dir, manifest = small
    assert (manifest['seed'], manifest['users'], manifest['transactions']) == (777, 30, 200)
    assert manifest['threshold'] == 10000.0
    planted = manifest['planted_cycles']
    assert sorted(c['length'] for c in planted) == [3, 4]
    for cycle in planted:
        assert manifest['focus']['account_id'] in cycle['members']
        assert cycle['members'][0] == min(cycle['members'])
        assert all(15000.0 <= amount <= 40000.0 for amount in cycle['amounts'])
    assert manifest['background_cycles'] == []
    assert load_manifest(data_dir)['planted_cycles'] == planted


def test_background_stays_below_threshold(small):
    data_dir, manifest = small
    transactions = pd.read_csv(os.path.join(data_dir, 'transactions.csv'))
    assert (transactions['amount'] >= 10000.0).sum() == 7


def test_generation_is_seeded(tmp_path):
    first = generate_dataset(str(tmp_path / 'a'), n_users=20, n_txns=50, planted=[CycleSpec(3)], seed=5)
    second = generate_dataset(str(tmp_path / 'b'), n_users=20, n_txns=50, planted=[CycleSpec(3)], seed=5)
    assert first == second
    with open(str(tmp_path / 'a' / 'transactions.csv')) as a, open(str(tmp_path / 'b' / 'transactions.csv')) as b:
        assert a.read() == b.read()


def test_pinned_members_are_rotated(tmp_path):
    manifest = generate_dataset(str(tmp_path), n_users=10, n_txns=20, planted=[CycleSpec(3, members=[7, 5, 6])])
    assert manifest['planted_cycles'][0]['members'] == [5, 6, 7]


@pytest.mark.parametrize('kwargs', [
    {'n_users': 1, 'n_txns': 10, 'planted': []},
    {'n_users': 10, 'n_txns': 10, 'planted': [], 'threshold': 0},
    {'n_users': 10, 'n_txns': 4, 'planted': [CycleSpec(5)]},
    {'n_users': 3, 'n_txns': 10, 'planted': [CycleSpec(4)]},
    {'n_users': 10, 'n_txns': 10, 'planted': [CycleSpec(3, members=[1, 2, 40])]},
    {'n_users': 10, 'n_txns': 10, 'planted': [CycleSpec(3, min_amount=500.0)]},
])
def test_infeasible_datasets(tmp_path, kwargs):
    with pytest.raises(SpecInfeasible) as excinfo:
        generate_dataset(str(tmp_path / 'data'), **kwargs)
    assert excinfo.value.exit_code == 4
    assert not os.path.exists(str(tmp_path / 'data'))


def test_parse_cycle_specs():
    first, second = parse_cycle_specs('3@15000-40000, 4')
    assert (first.length, first.min_amount, first.max_amount) == (3, 15000.0, 40000.0)
    assert (second.length, second.min_amount, second.max_amount) == (4, None, None)
    single, = parse_cycle_specs('5@20000')
    assert (single.min_amount, single.max_amount) == (20000.0, 20000.0)
    assert parse_cycle_specs('') == []


@pytest.mark.parametrize('text', ['9', 'x', '3@40000-15000'])
def test_invalid_cycle_specs(text):
    with pytest.raises(ConfigError):
        parse_cycle_specs(text)


def test_cycle_members_must_match_length():
    with pytest.raises(ConfigError):
        CycleSpec.from_data({'length': 3, 'members': [1, 2]})


def test_missing_manifest(tmp_path):
    with pytest.raises(ConfigError):
        load_manifest(str(tmp_path))
