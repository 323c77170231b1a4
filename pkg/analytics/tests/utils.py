import json
import os

import networkx as nx
import numpy as np

from analytics.construction.csr import CsrGraph
from analytics.coordinator.mock import MockCoordinator

TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
KNOWLEDGE_DOCS_DIR = os.path.join(os.path.dirname(os.path.dirname(TESTS_DIR)), 'knowledge', 'docs')

AML_QUERY = 'Please identify whether Anna Lee is involved in money laundering and summarize her transactions.'
AML_USERS = 150
AML_TRANSACTIONS = 1800


def make_graph(edges, n=None, weights=None, keys=None, directed=True):
    """
    A CsrGraph from ``(u, v)`` pairs over dense ids.
    """
    if n is None:
        n = 1 + max([max(u, v) for u, v in edges] or [-1])
    sources = [u for u, _ in edges]
    targets = [v for _, v in edges]
    return CsrGraph.from_edges(n, sources, targets, weights, keys=keys, directed=directed)


def to_networkx(g):
    nxg = nx.DiGraph() if g.directed else nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from((u, v) for u, v, _ in g.edges())
    return nxg


def random_graph(seed, n, m, weighted=False):
    rng = np.random.default_rng(seed)
    sources = rng.integers(0, n, size=m)
    targets = rng.integers(0, n, size=m)
    weights = np.round(rng.uniform(1, 100, size=m), 2) if weighted else None
    return CsrGraph.from_edges(n, sources, targets, weights)


def write_dataset(path, accounts, transfers, catalog=None):
    """
    Write a small money-flow dataset: ``accounts`` as (id, name) pairs and
    ``transfers`` as (txn, src, dst, amount, timestamp) tuples.
    """
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, 'accounts.csv'), 'w', encoding='utf-8') as fp:
        fp.write('account_id,name\n')
        for account_id, name in accounts:
            fp.write('%s,%s\n' % (account_id, name))
    with open(os.path.join(path, 'transactions.csv'), 'w', encoding='utf-8') as fp:
        fp.write('txn_id,src_account,dst_account,amount,timestamp,merchant_id\n')
        for txn_id, src, dst, amount, timestamp in transfers:
            fp.write('%s,%s,%s,%s,%s,M001\n' % (txn_id, src, dst, amount, timestamp))
    if catalog is None:
        from analytics.pipeline.dataset import catalog_data
        catalog = catalog_data(len(accounts), len(transfers))
    with open(os.path.join(path, 'catalog.json'), 'w', encoding='utf-8') as fp:
        json.dump(catalog, fp)
    return path


def canonical(cycle):
    cycle = list(cycle)
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def write_docs(root, tree):
    """
    Lay out a knowledge documentation tree.

    ``tree`` maps ``category/family`` paths to ``{algorithm id: markdown}``; a
    ``README.md`` key gives the directory its own document.
    """
    for family_path, documents in tree.items():
        directory = os.path.join(root, family_path)
        os.makedirs(directory, exist_ok=True)
        for name, text in documents.items():
            filename = name if name.endswith('.md') else '%s.md' % name
            with open(os.path.join(directory, filename), 'w', encoding='utf-8') as fp:
                fp.write(text)
    return root


class RecordingCoordinator(MockCoordinator):
    """
    The rule-table coordinator, remembering every request it saw.
    """

    def __init__(self):
        self.requests = []

    def attempt(self, request, previous_error=None):
        self.requests.append(request)
        return super().attempt(request, previous_error)
