from .catalog import Column, SourceCatalog, TabularSource, load_catalog  # noqa
from .csr import CsrGraph  # noqa
from .extract import PropertyGraph, extract  # noqa
from .layout import IN, OUT, SYMMETRIZED, WEIGHT_COLUMN, WEIGHT_COUNT, WEIGHT_NONE, to_csr  # noqa
from .projection import ProjectionRule, project  # noqa
from .schema import SchemaSpec, derive_schema  # noqa
from .sources import SourceFrames, read_sources  # noqa
from .views import StageGraphView, materialize_stage_input  # noqa
