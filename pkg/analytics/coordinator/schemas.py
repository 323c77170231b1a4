"""
The published response schema of every coordinator role.

A response that does not validate is rejected and retried once.
"""
import json

from rest_framework import serializers

from analytics.construction.schema import SchemaSpecSerializer
from analytics.planning.dag import (
    BINDING_KINDS, GATE_TESTS, INSERT_ADAPTER, REFINE_ACTIONS, SELECTORS, SET_PARAMS, SOURCE_DATASET,
    STAGE_OUTPUT, SUBSTITUTE_TOOL
)
from analytics.tools.results import canonical_json

PLAN = 'Plan'
SCHEMA = 'Schema'
REFINE = 'Refine'
REPORT = 'Report'
ROLES = (PLAN, SCHEMA, REFINE, REPORT)

STAGE_ID_PATTERN = r'^[a-z][a-z0-9_]*$'
GOAL_MAX_LENGTH = 256


class BindingSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=BINDING_KINDS)
    ref = serializers.JSONField()
    selector = serializers.ChoiceField(choices=SELECTORS, required=False, allow_null=True, default=None)

    def validate(self, data):
        if data['kind'] in (SOURCE_DATASET, STAGE_OUTPUT) and not isinstance(data['ref'], str):
            raise serializers.ValidationError('%s bindings reference an id' % data['kind'])
        return data


class GateSerializer(serializers.Serializer):
    producer = serializers.CharField()
    test = serializers.ChoiceField(choices=GATE_TESTS)
    value = serializers.JSONField()


class StageSerializer(serializers.Serializer):
    id = serializers.RegexField(STAGE_ID_PATTERN, max_length=64)
    goal = serializers.CharField(max_length=GOAL_MAX_LENGTH)
    suggested_family = serializers.CharField(required=False, allow_null=True, default=None)
    suggested_tool = serializers.CharField(required=False, allow_null=True, default=None)
    bindings = serializers.DictField(child=BindingSerializer())
    params = serializers.DictField(required=False, default=dict)
    directive = serializers.DictField(required=False, allow_null=True, default=None)
    gate = GateSerializer(required=False, allow_null=True, default=None)


class PlanResponseSerializer(serializers.Serializer):
    stages = StageSerializer(many=True, allow_empty=False)

    def validate_stages(self, stages):
        ids = [stage['id'] for stage in stages]
        if len(set(ids)) != len(ids):
            raise serializers.ValidationError('stage ids must be unique')
        for stage in stages:
            referenced = [b['ref'] for b in stage['bindings'].values() if b['kind'] == STAGE_OUTPUT]
            if stage['gate']:
                referenced.append(stage['gate']['producer'])
            unknown = sorted(set(referenced) - set(ids))
            if unknown:
                raise serializers.ValidationError(
                    'stage %s references unknown stages: %s' % (stage['id'], ', '.join(unknown)))
        return stages


class RefineActionSerializer(serializers.Serializer):
    action = serializers.ChoiceField(choices=REFINE_ACTIONS)
    node = serializers.CharField()
    param = serializers.CharField(required=False, allow_null=True, default=None)
    params = serializers.DictField(required=False, default=dict)
    tool = serializers.CharField(required=False, allow_null=True, default=None)
    slot = serializers.CharField(required=False, allow_null=True, default=None)
    k = serializers.IntegerField(min_value=1, required=False, default=10)

    def validate(self, data):
        if data['action'] == SUBSTITUTE_TOOL and not data['tool']:
            raise serializers.ValidationError('substitute_tool needs a tool')
        if data['action'] == SET_PARAMS and not data['params']:
            raise serializers.ValidationError('set_params needs params')
        if data['action'] == INSERT_ADAPTER and not data['slot']:
            raise serializers.ValidationError('insert_adapter needs a slot')
        return data


class RefineResponseSerializer(serializers.Serializer):
    actions = RefineActionSerializer(many=True)


class ReportSectionSerializer(serializers.Serializer):
    stage = serializers.CharField()
    text = serializers.CharField(max_length=2000)


class ReportResponseSerializer(serializers.Serializer):
    summary = serializers.CharField()
    sections = ReportSectionSerializer(many=True)
    directives = serializers.DictField(child=serializers.DictField(), required=False, default=dict)


RESPONSE_SERIALIZERS = {
    PLAN: PlanResponseSerializer,
    SCHEMA: SchemaSpecSerializer,
    REFINE: RefineResponseSerializer,
    REPORT: ReportResponseSerializer,
}


def validate_response(role, value):
    """
    Validate ``value`` against the schema of ``role``; returns plain JSON data.
    """
    serializer = RESPONSE_SERIALIZERS[role](data=value)
    serializer.is_valid(raise_exception=True)
    return json.loads(canonical_json(serializer.validated_data))


def describe_schema(role):
    """
    Field names of a role's schema, quoted in prompts.
    """
    return sorted(RESPONSE_SERIALIZERS[role]().fields)
