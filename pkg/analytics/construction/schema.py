"""
Task-aware graph schemas.

A ``SchemaSpec`` names the entities and relations one task needs out of the raw
sources. It is derived by the coordinator, or by role templates when the catalog
annotates its columns with roles.
"""
import json
import logging

from rest_framework import serializers

from analytics.exceptions import CatalogMismatch, SchemaInferenceFailed

from .catalog import (
    FLOAT, INT, NUMERIC_TYPES, ROLE_COUNTERPARTY_KEY, ROLE_ENTITY_KEY, ROLE_LABEL, ROLE_MERCHANT_KEY, ROLE_TIME,
    ROLE_WEIGHT, STRING, TIMESTAMP
)

logger = logging.getLogger(__name__)

FILTER_OPS = ('>=', '<=', '==', '!=')

TEMPLATE_MONEY_FLOW = 'money_flow'
TEMPLATE_PURCHASE = 'purchase'


class PredicateSerializer(serializers.Serializer):
    column = serializers.CharField()
    op = serializers.ChoiceField(choices=FILTER_OPS)
    value = serializers.JSONField()


class EntitySerializer(serializers.Serializer):
    label = serializers.CharField()
    source = serializers.CharField()
    key = serializers.CharField()
    attributes = serializers.ListField(child=serializers.CharField(), required=False, default=list)


class RelationSerializer(serializers.Serializer):
    label = serializers.CharField()
    source = serializers.CharField()
    src_entity = serializers.CharField()
    src_column = serializers.CharField()
    dst_entity = serializers.CharField()
    dst_column = serializers.CharField()
    weight = serializers.CharField(required=False, allow_null=True, default=None)
    attributes = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    filters = PredicateSerializer(many=True, required=False, default=list)
    directed = serializers.BooleanField(required=False, default=True)


class SchemaSpecSerializer(serializers.Serializer):
    entities = EntitySerializer(many=True)
    relations = RelationSerializer(many=True)

    def validate(self, data):
        labels = [e['label'] for e in data['entities']]
        if len(set(labels)) != len(labels):
            raise serializers.ValidationError('entity labels must be unique')
        relation_labels = [r['label'] for r in data['relations']]
        if len(set(relation_labels)) != len(relation_labels):
            raise serializers.ValidationError('relation labels must be unique')
        for relation in data['relations']:
            for end in ('src_entity', 'dst_entity'):
                if relation[end] not in labels:
                    raise serializers.ValidationError(
                        'relation %r uses undeclared entity %r' % (relation['label'], relation[end]))
        return data


class Predicate(object):
    def __init__(self, column, op, value):
        self.column = column
        self.op = op
        self.value = value

    def mask(self, values):
        if self.op == '>=':
            return values >= self.value
        if self.op == '<=':
            return values <= self.value
        if self.op == '==':
            return values == self.value
        return values != self.value

    def holds(self, value):
        return bool(self.mask(value))

    def to_data(self):
        return {'column': self.column, 'op': self.op, 'value': self.value}


class EntitySpec(object):
    def __init__(self, label, source, key, attributes=()):
        self.label = label
        self.source = source
        self.key = key
        self.attributes = list(attributes)

    def columns(self):
        return [self.key] + self.attributes

    def to_data(self):
        return {'label': self.label, 'source': self.source, 'key': self.key, 'attributes': self.attributes}


class RelationSpec(object):
    def __init__(self, label, source, src_entity, src_column, dst_entity, dst_column, weight=None,
                 attributes=(), filters=(), directed=True):
        self.label = label
        self.source = source
        self.src_entity = src_entity
        self.src_column = src_column
        self.dst_entity = dst_entity
        self.dst_column = dst_column
        self.weight = weight
        self.attributes = list(attributes)
        self.filters = [f if isinstance(f, Predicate) else Predicate(**f) for f in filters]
        self.directed = directed

    def columns(self):
        columns = [self.src_column, self.dst_column]
        if self.weight:
            columns.append(self.weight)
        columns.extend(self.attributes)
        columns.extend(f.column for f in self.filters)
        return _unique(columns)

    def to_data(self):
        return {
            'label': self.label,
            'source': self.source,
            'src_entity': self.src_entity,
            'src_column': self.src_column,
            'dst_entity': self.dst_entity,
            'dst_column': self.dst_column,
            'weight': self.weight,
            'attributes': self.attributes,
            'filters': [f.to_data() for f in self.filters],
            'directed': self.directed,
        }


class SchemaSpec(object):
    def __init__(self, entities, relations):
        self.entities = list(entities)
        self.relations = list(relations)

    def entity(self, label):
        for entity in self.entities:
            if entity.label == label:
                return entity
        raise KeyError(label)

    def relation(self, label):
        for relation in self.relations:
            if relation.label == label:
                return relation
        raise KeyError(label)

    def columns_for(self, source_id):
        """
        Every column of ``source_id`` the schema touches, in first-use order.
        """
        columns = []
        for entity in self.entities:
            if entity.source == source_id:
                columns.extend(entity.columns())
        for relation in self.relations:
            if relation.source == source_id:
                columns.extend(relation.columns())
        return _unique(columns)

    def sources(self):
        return _unique([e.source for e in self.entities] + [r.source for r in self.relations])

    def primary_relation(self):
        return self.relations[0].label if self.relations else None

    def validate(self, catalog):
        """
        Check every referenced source and column against the catalog.
        """
        for entity in self.entities:
            source = catalog.get(entity.source)
            for name in entity.columns():
                source.column(name)
        for relation in self.relations:
            source = catalog.get(relation.source)
            for name in relation.columns():
                source.column(name)
            if relation.weight and source.column(relation.weight).type not in NUMERIC_TYPES:
                raise CatalogMismatch(
                    'weight column %r of %r is not numeric' % (relation.weight, relation.label),
                    column=relation.weight, source=source.id,
                )
            for end, column in ((relation.src_entity, relation.src_column), (relation.dst_entity, relation.dst_column)):
                entity = self.entity(end)
                key_type = catalog.get(entity.source).column(entity.key).type
                if source.column(column).type != key_type:
                    raise CatalogMismatch(
                        'column %r does not match the %s key type %s' % (column, end, key_type),
                        column=column, source=source.id,
                    )
            for predicate in relation.filters:
                _check_literal(source.column(predicate.column), predicate)
        return self

    def to_data(self):
        return {
            'entities': [e.to_data() for e in self.entities],
            'relations': [r.to_data() for r in self.relations],
        }

    @classmethod
    def from_data(cls, data):
        serializer = SchemaSpecSerializer(data=data)
        if not serializer.is_valid():
            raise SchemaInferenceFailed('invalid schema: %s' % json.dumps(serializer.errors, sort_keys=True))
        validated = serializer.validated_data
        return cls(
            [EntitySpec(**dict(e)) for e in validated['entities']],
            [RelationSpec(**dict(r, filters=[dict(f) for f in r['filters']])) for r in validated['relations']],
        )


def _check_literal(column, predicate):
    value = predicate.value
    ok = True
    if column.type == INT:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif column.type == FLOAT:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif column.type in (STRING, TIMESTAMP):
        ok = isinstance(value, str)
    if not ok:
        raise CatalogMismatch(
            'filter literal %r does not fit %s column %r' % (value, column.type, column.name), column=column.name)


def _unique(items):
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen


###################
# Role templates #
###################

def _first(columns):
    return columns[0].name if columns else None


def _user_entity(catalog, relation_source):
    """
    The user entity lives on a dedicated source (keys and labels only) when the catalog
    has one, else on the relation source itself.
    """
    for source in catalog:
        if source is relation_source:
            continue
        if source.has_role(ROLE_ENTITY_KEY) and not source.has_role(ROLE_COUNTERPARTY_KEY) \
                and not source.has_role(ROLE_MERCHANT_KEY):
            return EntitySpec('user', source.id, _first(source.columns_with_role(ROLE_ENTITY_KEY)),
                              [c.name for c in source.columns_with_role(ROLE_LABEL)])
    return EntitySpec('user', relation_source.id, _first(relation_source.columns_with_role(ROLE_ENTITY_KEY)))


def _money_flow(catalog):
    for source in catalog:
        if source.has_role(ROLE_ENTITY_KEY) and source.has_role(ROLE_COUNTERPARTY_KEY):
            user = _user_entity(catalog, source)
            relation = RelationSpec(
                'transfer', source.id,
                'user', _first(source.columns_with_role(ROLE_ENTITY_KEY)),
                'user', _first(source.columns_with_role(ROLE_COUNTERPARTY_KEY)),
                weight=_first(source.columns_with_role(ROLE_WEIGHT)),
                attributes=[c.name for c in source.columns_with_role(ROLE_TIME)],
            )
            return SchemaSpec([user], [relation])
    raise SchemaInferenceFailed('no source carries both entity-key and counterparty-key columns')


def _purchase(catalog):
    for source in catalog:
        if source.has_role(ROLE_ENTITY_KEY) and source.has_role(ROLE_MERCHANT_KEY):
            user = _user_entity(catalog, source)
            merchant_column = _first(source.columns_with_role(ROLE_MERCHANT_KEY))
            merchant = EntitySpec('merchant', source.id, merchant_column)
            relation = RelationSpec(
                'purchase', source.id,
                'user', _first(source.columns_with_role(ROLE_ENTITY_KEY)),
                'merchant', merchant_column,
                weight=_first(source.columns_with_role(ROLE_WEIGHT)),
                attributes=[c.name for c in source.columns_with_role(ROLE_TIME)],
                filters=[Predicate(merchant_column, '!=', '')],
            )
            return SchemaSpec([user, merchant], [relation])
    raise SchemaInferenceFailed('no source carries both entity-key and merchant-key columns')


SCHEMA_TEMPLATES = {
    TEMPLATE_MONEY_FLOW: _money_flow,
    TEMPLATE_PURCHASE: _purchase,
}


def schema_from_template(template, catalog):
    try:
        build = SCHEMA_TEMPLATES[template]
    except KeyError:
        raise SchemaInferenceFailed('unknown schema template %r' % (template,))
    return build(catalog)


def derive_schema(task, catalog, kg=None, coordinator=None):
    """
    Derive the task-relevant schema over ``catalog``.

    Without a coordinator the keyword→template fallback of the rule table decides.
    """
    from analytics.coordinator import CoordinatorRequest, SCHEMA
    from analytics.coordinator.rules import match_schema_template

    if not len(catalog):
        raise SchemaInferenceFailed('the source catalog is empty')
    if coordinator is None:
        schema = schema_from_template(match_schema_template(task), catalog)
    else:
        payload = {'task': task, 'catalog': catalog.to_data()}
        if kg is not None and len(kg):
            payload['knowledge'] = [c.node_id for c in kg.retrieve(task, 2).candidates]
        response = coordinator.complete(CoordinatorRequest(SCHEMA, payload))
        schema = SchemaSpec.from_data(response.value)
    schema.validate(catalog)
    logger.info('schema for %r: entities %s, relations %s', task,
                [e.label for e in schema.entities], [r.label for r in schema.relations])
    return schema
