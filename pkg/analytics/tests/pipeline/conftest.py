import pytest

from analytics.construction import extract, load_catalog, read_sources
from analytics.construction.schema import TEMPLATE_MONEY_FLOW, schema_from_template
from analytics.pipeline import StageStore
from analytics.planning import Binding, Gate, TaskDag, TaskNode
from analytics.planning.dag import CONTAINS, EDGES, SOURCE_DATASET, STAGE_OUTPUT

from ..utils import write_dataset

ACCOUNTS = [(1, 'Anna Lee'), (2, 'Bo Chen'), (3, 'Cy Diaz'), (4, 'Dee Ek')]
TRANSFERS = [
    (1, 1, 2, '15000.00', '2024-01-01T10:00:00Z'),
    (2, 2, 3, '12000.50', '2024-01-02T10:00:00Z'),
    (3, 3, 1, '11000.00', '2024-01-03T10:00:00Z'),
    (4, 1, 2, '20.00', '2024-01-04T10:00:00Z'),
    (5, 4, 1, '50.00', '2024-01-05T10:00:00Z'),
]
DATASETS = {'transfer': {'directed': True, 'weighted': True}}


@pytest.fixture
def small_data_dir(tmp_path):
    return write_dataset(str(tmp_path / 'small'), ACCOUNTS, TRANSFERS)


@pytest.fixture
def small_pg(small_data_dir):
    catalog = load_catalog(small_data_dir)
    schema = schema_from_template(TEMPLATE_MONEY_FLOW, catalog).validate(catalog)
    return extract(read_sources(catalog, schema), schema, catalog)


@pytest.fixture
def store():
    return StageStore()


@pytest.fixture
def cycle_dag():
    """
    Builder of rank → (gate) cycles → flows over the transfer relation.
    """
    def build(anchor='Anna Lee', min_weight=10000.0, test=CONTAINS):
        source = Binding(SOURCE_DATASET, 'transfer')
        return TaskDag([
            TaskNode('rank', 'rank accounts', 'pagerank', {'weighted': True}, {'graph': source}),
            TaskNode('cycles', 'cycles through the focus', 'enumerate_cycles',
                     {'anchor': 'Anna Lee', 'min_weight': min_weight, 'max_len': 5}, {'graph': source},
                     gate=Gate('rank', test, anchor)),
            TaskNode('flows', 'amounts along the cycles', 'aggregate_flows', {},
                     {'table': Binding(STAGE_OUTPUT, 'cycles', EDGES)}),
        ], DATASETS)
    return build
