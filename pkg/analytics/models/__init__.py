from .run import AnalysisRun, StageRecord

__all__ = ['AnalysisRun', 'StageRecord']
