import json
import os

from django.conf import settings
from rest_framework import serializers

from analytics.exceptions import ConfigError

COORDINATORS = ('mock', 'remote')

DEFAULT_WIDTH = 4
DEFAULT_SEED = 777
DEFAULT_HIGH_VALUE_THRESHOLD = 10000.0


class DistillBudgetSerializer(serializers.Serializer):
    max_items = serializers.IntegerField(min_value=1, required=False)
    max_chars = serializers.IntegerField(min_value=1, required=False)


class RunConfigSerializer(serializers.Serializer):
    data_dir = serializers.CharField()
    knowledge_path = serializers.CharField(required=False)
    coordinator = serializers.ChoiceField(choices=COORDINATORS, required=False, default='mock')
    coordinator_options = serializers.DictField(required=False, default=dict)
    seed = serializers.IntegerField(required=False, default=DEFAULT_SEED)
    r_max = serializers.IntegerField(min_value=0, required=False)
    width = serializers.IntegerField(min_value=1, max_value=64, required=False)
    retrieval_k = serializers.IntegerField(min_value=1, required=False)
    context_budget = serializers.IntegerField(min_value=256, required=False, allow_null=True, default=None)
    distill_budget = DistillBudgetSerializer(required=False, allow_null=True, default=None)
    high_value_threshold = serializers.FloatField(min_value=0.0, required=False)
    inject_faults = serializers.DictField(child=serializers.CharField(), required=False, default=dict)
    output_dir = serializers.CharField(required=False, allow_null=True, default=None)
    run_id = serializers.RegexField(r'^[A-Za-z0-9_.-]+$', required=False, allow_null=True, default=None)

    def validate_data_dir(self, value):
        if not os.path.isdir(value):
            raise serializers.ValidationError('%s is not a directory' % value)
        return value


class RunConfig(object):
    """
    Everything one run needs; defaults come from the ``AAG_*`` settings.
    """

    def __init__(self, data_dir, knowledge_path=None, coordinator='mock', coordinator_options=None, seed=DEFAULT_SEED,
                 r_max=None, width=None, retrieval_k=None, context_budget=None, distill_budget=None,
                 high_value_threshold=None, inject_faults=None, output_dir=None, run_id=None):
        self.data_dir = data_dir
        self.knowledge_path = knowledge_path or settings.AAG_KNOWLEDGE_PATH
        self.coordinator = coordinator
        self.coordinator_options = dict(coordinator_options or {})
        self.seed = seed
        self.r_max = settings.AAG_R_MAX if r_max is None else r_max
        self.width = width or getattr(settings, 'AAG_WIDTH', DEFAULT_WIDTH)
        self.retrieval_k = retrieval_k or settings.AAG_RETRIEVAL_K
        self.context_budget = context_budget
        self.distill_budget = dict(distill_budget or {})
        self.high_value_threshold = (
            getattr(settings, 'AAG_HIGH_VALUE_THRESHOLD', DEFAULT_HIGH_VALUE_THRESHOLD)
            if high_value_threshold is None else high_value_threshold
        )
        self.inject_faults = dict(inject_faults or {})
        self.output_dir = output_dir
        self.run_id = run_id

    @classmethod
    def from_data(cls, data):
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise ConfigError('invalid run config: %s' % json.dumps(serializer.errors, sort_keys=True))
        return cls(**serializer.validated_data)

    def to_data(self):
        return {
            'data_dir': self.data_dir,
            'knowledge_path': self.knowledge_path,
            'coordinator': self.coordinator,
            'seed': self.seed,
            'r_max': self.r_max,
            'width': self.width,
            'retrieval_k': self.retrieval_k,
            'context_budget': self.context_budget,
            'distill_budget': self.distill_budget,
            'high_value_threshold': self.high_value_threshold,
            'inject_faults': self.inject_faults,
        }


def load_run_config(path=None, **overrides):
    """
    Read the JSON config file at ``path`` (optional) and apply ``overrides``;
    None-valued overrides leave the file value in place.
    """
    data = {}
    if path:
        try:
            with open(path, encoding='utf-8') as fp:
                data = json.load(fp)
        except FileNotFoundError:
            raise ConfigError('config file %s does not exist' % path)
        except ValueError as e:
            raise ConfigError('config file %s is not valid JSON: %s' % (path, e))
        if not isinstance(data, dict):
            raise ConfigError('config file %s must hold a JSON object' % path)
    data.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_data(data)
