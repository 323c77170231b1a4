from .base import (  # noqa
    PLAN, REFINE, REPORT, ROLES, SCHEMA, Coordinator, CoordinatorRequest, CoordinatorResponse, get_coordinator
)
