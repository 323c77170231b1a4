"""
Compounding failure of multi-step workflows.

A workflow of ``stages`` independent steps that each succeed with probability
``p`` succeeds end to end with probability ``p ** stages``.
"""
import logging

import numpy as np

from analytics.exceptions import ConfigError

logger = logging.getLogger(__name__)


class BenchResult(object):
    def __init__(self, stages, p, trials, seed, successes):
        self.stages = stages
        self.p = p
        self.trials = trials
        self.seed = seed
        self.successes = successes

    @property
    def exact(self):
        return self.p ** self.stages

    @property
    def empirical(self):
        return self.successes / self.trials

    def to_data(self):
        return {
            'stages': self.stages,
            'p': self.p,
            'trials': self.trials,
            'seed': self.seed,
            'successes': self.successes,
            'empirical_success': round(self.empirical, 6),
            'exact_success': round(self.exact, 6),
            'empirical_failure': round(1 - self.empirical, 6),
            'exact_failure': round(1 - self.exact, 6),
        }


def failure_bench(stages, p, trials, seed=777):
    """
    Simulate ``trials`` workflows of ``stages`` steps with per-step success ``p``.
    """
    if stages < 1:
        raise ConfigError('stages must be at least 1')
    if not 0.0 <= p <= 1.0:
        raise ConfigError('p must lie in [0, 1]')
    if trials < 1:
        raise ConfigError('trials must be at least 1')
    rng = np.random.default_rng(seed)
    steps = rng.random((trials, stages)) < p
    successes = int(np.count_nonzero(steps.all(axis=1)))
    result = BenchResult(stages, p, trials, seed, successes)
    logger.info('bench s=%d p=%s: %d/%d succeeded (exact %.4f)', stages, p, successes, trials, result.exact)
    return result
