"""
Synthetic money-flow datasets with planted high-value cycles.

Background transfers draw their amounts from a low distribution kept below half
the high-value threshold; planted cycle transfers are drawn above it. The
manifest therefore lists every cycle above the threshold exactly, planted or
not, by re-running the cycle search over the high-value edges.
"""
import datetime
import json
import logging
import os

import numpy as np
import pandas as pd
from faker import Faker
from rest_framework import serializers

from analytics.algorithms.cycles import LENGTH_CAP, enumerate_cycles
from analytics.construction.catalog import (
    CATALOG_FILENAME, FLOAT, INT, ROLE_COUNTERPARTY_KEY, ROLE_ENTITY_KEY, ROLE_LABEL, ROLE_MERCHANT_KEY, ROLE_TIME,
    ROLE_WEIGHT, STRING, TIMESTAMP
)
from analytics.construction.csr import CsrGraph
from analytics.exceptions import ConfigError, SpecInfeasible

from .store import RunDirectory

logger = logging.getLogger(__name__)

DEFAULT_USERS = 1446
DEFAULT_TRANSACTIONS = 17512
DEFAULT_CYCLE_LENGTHS = (3, 4, 5, 3, 4)
DEFAULT_THRESHOLD = 10000.0
DEFAULT_SEED = 777
FOCUS_NAME = 'Anna Lee'
MERCHANT_COUNT = 60
PERIOD_DAYS = 90
PERIOD_START = datetime.datetime(2024, 1, 1)

MANIFEST_FILENAME = 'manifest.json'
ACCOUNTS_FILENAME = 'accounts.csv'
TRANSACTIONS_FILENAME = 'transactions.csv'


class CycleSpecSerializer(serializers.Serializer):
    length = serializers.IntegerField(min_value=2, max_value=LENGTH_CAP)
    min_amount = serializers.FloatField(required=False, allow_null=True, default=None)
    max_amount = serializers.FloatField(required=False, allow_null=True, default=None)
    members = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False, allow_null=True,
                                    default=None)

    def validate(self, data):
        if data['members'] is not None and len(data['members']) != data['length']:
            raise serializers.ValidationError('members must list exactly length accounts')
        if data['members'] is not None and len(set(data['members'])) != len(data['members']):
            raise serializers.ValidationError('cycle members must be distinct')
        low, high = data['min_amount'], data['max_amount']
        if low is not None and high is not None and low > high:
            raise serializers.ValidationError('min_amount is above max_amount')
        return data


class CycleSpec(object):
    """
    One planted cycle: its length, amount range and optionally its members
    (account ids, in transfer order).
    """

    def __init__(self, length, min_amount=None, max_amount=None, members=None):
        self.length = length
        self.min_amount = min_amount
        self.max_amount = max_amount
        self.members = list(members) if members is not None else None

    def amount_range(self, threshold):
        low = self.min_amount if self.min_amount is not None else threshold * 1.5
        high = self.max_amount if self.max_amount is not None else max(low, threshold * 4)
        return low, high

    @classmethod
    def from_data(cls, data):
        serializer = CycleSpecSerializer(data=data)
        if not serializer.is_valid():
            raise ConfigError('invalid cycle spec %r: %s' % (data, serializer.errors))
        return cls(**serializer.validated_data)


def parse_cycle_specs(text):
    """
    Parse ``3,4,5`` or ``3@15000-40000,4`` into cycle specs; an empty string plants none.
    """
    specs = []
    for item in (text or '').split(','):
        item = item.strip()
        if not item:
            continue
        length, _, amounts = item.partition('@')
        data = {'length': length}
        if amounts:
            low, _, high = amounts.partition('-')
            data.update(min_amount=low, max_amount=high or low)
        specs.append(CycleSpec.from_data(data))
    return specs


def default_cycle_specs():
    return [CycleSpec(length) for length in DEFAULT_CYCLE_LENGTHS]


def canonical_cycle(members):
    i = members.index(min(members))
    return list(members[i:]) + list(members[:i])


class _Generator(object):
    def __init__(self, n_users, n_txns, planted, seed, threshold, focus_name):
        self.n_users = n_users
        self.n_txns = n_txns
        self.planted = planted
        self.threshold = threshold
        self.focus_name = focus_name
        self.rng = np.random.default_rng(seed)
        self.faker = Faker()
        self.faker.seed_instance(seed)

    def check(self):
        if self.n_users < 2:
            raise SpecInfeasible('a dataset needs at least two accounts')
        if self.threshold <= 0:
            raise SpecInfeasible('the high-value threshold must be positive')
        planted_edges = sum(spec.length for spec in self.planted)
        if planted_edges > self.n_txns:
            raise SpecInfeasible('%d planted transfers do not fit in %d transactions' % (planted_edges, self.n_txns))
        fresh = sum(spec.length - 1 for spec in self.planted if spec.members is None)
        pinned = {m for spec in self.planted for m in spec.members or ()}
        if fresh + len(pinned) + 1 > self.n_users:
            raise SpecInfeasible('planted cycles need %d distinct accounts, only %d exist'
                                 % (fresh + len(pinned) + 1, self.n_users))
        if any(m > self.n_users for m in pinned):
            raise SpecInfeasible('a planted member lies outside accounts 1..%d' % self.n_users)
        for spec in self.planted:
            low, _ = spec.amount_range(self.threshold)
            if low < self.threshold:
                raise SpecInfeasible('planted amounts must start at or above the threshold %s' % self.threshold)

    def accounts(self):
        names = []
        for _ in range(self.n_users):
            name = self.faker.name()
            while name == self.focus_name:
                name = self.faker.name()
            names.append(name)
        focus = int(self.rng.integers(1, self.n_users + 1))
        names[focus - 1] = self.focus_name
        return pd.DataFrame({'account_id': np.arange(1, self.n_users + 1), 'name': names}), focus

    def cycles(self, focus):
        pinned = {m for spec in self.planted for m in spec.members or ()}
        free = np.array([a for a in range(1, self.n_users + 1) if a != focus and a not in pinned])
        free = self.rng.permutation(free).tolist()
        cycles = []
        for spec in self.planted:
            if spec.members is not None:
                members = list(spec.members)
            else:
                members = [focus] + [free.pop() for _ in range(spec.length - 1)]
            low, high = spec.amount_range(self.threshold)
            amounts = np.round(self.rng.uniform(low, high, size=len(members)), 2).tolist()
            cycles.append((members, amounts))
        return cycles

    def transactions(self, focus):
        planted = self.cycles(focus)
        src, dst, amount = [], [], []
        for members, amounts in planted:
            for i, member in enumerate(members):
                src.append(member)
                dst.append(members[(i + 1) % len(members)])
                amount.append(amounts[i])

        n_background = self.n_txns - len(src)
        bg_src = self.rng.integers(1, self.n_users + 1, size=n_background)
        offset = self.rng.integers(1, self.n_users, size=n_background)
        bg_dst = (bg_src - 1 + offset) % self.n_users + 1
        ceiling = self.threshold * 0.5
        bg_amount = np.minimum(np.round(self.rng.lognormal(np.log(ceiling / 20), 0.9, size=n_background), 2),
                               ceiling - 0.01)
        src.extend(bg_src.tolist())
        dst.extend(bg_dst.tolist())
        amount.extend(bg_amount.tolist())

        order = self.rng.permutation(len(src))
        seconds = np.sort(self.rng.integers(0, PERIOD_DAYS * 86400, size=len(src)))
        frame = pd.DataFrame({
            'txn_id': np.arange(1, len(src) + 1),
            'src_account': np.asarray(src)[order],
            'dst_account': np.asarray(dst)[order],
            'amount': np.asarray(amount)[order],
            'timestamp': [(PERIOD_START + datetime.timedelta(seconds=int(s))).strftime('%Y-%m-%dT%H:%M:%SZ')
                          for s in seconds],
            'merchant_id': ['M%03d' % m for m in self.rng.integers(1, MERCHANT_COUNT + 1, size=len(src))],
        })
        return frame, planted


def catalog_data(n_users, n_txns):
    return {'sources': [
        {
            'id': 'accounts',
            'path': ACCOUNTS_FILENAME,
            'row_count': n_users,
            'columns': [
                {'name': 'account_id', 'type': INT, 'role': ROLE_ENTITY_KEY},
                {'name': 'name', 'type': STRING, 'role': ROLE_LABEL},
            ],
        },
        {
            'id': 'transactions',
            'path': TRANSACTIONS_FILENAME,
            'row_count': n_txns,
            'columns': [
                {'name': 'txn_id', 'type': INT, 'role': None},
                {'name': 'src_account', 'type': INT, 'role': ROLE_ENTITY_KEY},
                {'name': 'dst_account', 'type': INT, 'role': ROLE_COUNTERPARTY_KEY},
                {'name': 'amount', 'type': FLOAT, 'role': ROLE_WEIGHT},
                {'name': 'timestamp', 'type': TIMESTAMP, 'role': ROLE_TIME},
                {'name': 'merchant_id', 'type': STRING, 'role': ROLE_MERCHANT_KEY},
            ],
        },
    ]}


def high_value_cycles(transactions, n_users, threshold):
    """
    Every simple cycle (length 2 up to the search cap) of transfers at or above
    ``threshold``, canonically rotated and sorted.
    """
    heavy = transactions[transactions['amount'] >= threshold]
    graph = CsrGraph.from_edges(
        n_users, heavy['src_account'].to_numpy() - 1, heavy['dst_account'].to_numpy() - 1,
        heavy['amount'].to_numpy(), keys=range(1, n_users + 1),
    )
    found = enumerate_cycles(graph, min_len=2, max_len=LENGTH_CAP, min_weight=threshold)
    return [[int(k) for k in cycle] for cycle in found.cycles]


def generate_dataset(out_dir, n_users=DEFAULT_USERS, n_txns=DEFAULT_TRANSACTIONS, planted=None, seed=DEFAULT_SEED,
                     threshold=DEFAULT_THRESHOLD, focus_name=FOCUS_NAME):
    """
    Write ``accounts.csv``, ``transactions.csv``, ``catalog.json`` and
    ``manifest.json`` into ``out_dir``; returns the manifest.

    ``planted`` defaults to five cycles of length 3 to 5 through the focus account.
    """
    planted = default_cycle_specs() if planted is None else list(planted)
    generator = _Generator(n_users, n_txns, planted, seed, float(threshold), focus_name)
    generator.check()

    accounts, focus = generator.accounts()
    transactions, cycles = generator.transactions(focus)
    out = RunDirectory(out_dir)
    accounts.to_csv(out.join(ACCOUNTS_FILENAME), index=False)
    transactions.to_csv(out.join(TRANSACTIONS_FILENAME), index=False)
    out.write_json(CATALOG_FILENAME, catalog_data(n_users, n_txns))

    planted_cycles = sorted(
        [{'members': canonical_cycle(members), 'length': len(members), 'amounts': amounts}
         for members, amounts in cycles],
        key=lambda c: c['members'],
    )
    planted_members = [c['members'] for c in planted_cycles]
    background = [c for c in high_value_cycles(transactions, n_users, threshold) if c not in planted_members]
    manifest = {
        'seed': seed,
        'users': n_users,
        'transactions': n_txns,
        'threshold': float(threshold),
        'focus': {'account_id': focus, 'name': focus_name},
        'planted_cycles': planted_cycles,
        'background_cycles': background,
    }
    out.write_json(MANIFEST_FILENAME, manifest)
    logger.info('generated %d accounts, %d transactions, %d planted cycles into %s',
                n_users, n_txns, len(planted_cycles), out_dir)
    return manifest


def load_manifest(data_dir):
    path = os.path.join(data_dir, MANIFEST_FILENAME)
    try:
        with open(path, encoding='utf-8') as fp:
            return json.load(fp)
    except FileNotFoundError:
        raise ConfigError('no %s in %s' % (MANIFEST_FILENAME, data_dir))
