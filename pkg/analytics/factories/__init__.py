from .run import AnalysisRunFactory, StageRecordFactory  # noqa
from .user import UserFactory  # noqa
