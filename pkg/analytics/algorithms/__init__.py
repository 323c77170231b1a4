from .aggregation import aggregate_flows  # noqa
from .components import connected_components  # noqa
from .cycles import enumerate_cycles  # noqa
from .ranking import pagerank, personalized_pagerank, top_k  # noqa
from .results import CycleSet, EdgeTable, FlowSummary, NodeScores, NodeSet, Scalar, Table  # noqa
from .traversal import khop  # noqa
