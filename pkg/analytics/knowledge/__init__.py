from .builder import build_knowledge  # noqa
from .expansion import ExpansionRequest, expand_stub  # noqa
from .graph import (  # noqa
    ALGORITHM, CATEGORY, CONTAINS, FAMILY, NOT_USEFUL, REFINES, USEFUL, VARIANT_OF, KnowledgeEdge, KnowledgeGraph,
    KnowledgeNode, KnowledgeSnapshot, RetrievalResult
)
from .loader import dump_knowledge, load_knowledge  # noqa
