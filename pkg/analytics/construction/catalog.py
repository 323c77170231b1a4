import json
import os

from rest_framework import serializers

from analytics.exceptions import CatalogMismatch, ConfigError

STRING = 'String'
INT = 'Int'
FLOAT = 'Float'
TIMESTAMP = 'Timestamp'
COLUMN_TYPES = (STRING, INT, FLOAT, TIMESTAMP)
NUMERIC_TYPES = (INT, FLOAT)

ROLE_ENTITY_KEY = 'entity-key'
ROLE_COUNTERPARTY_KEY = 'counterparty-key'
ROLE_MERCHANT_KEY = 'merchant-key'
ROLE_LABEL = 'label'
ROLE_WEIGHT = 'weight'
ROLE_TIME = 'time'
COLUMN_ROLES = (ROLE_ENTITY_KEY, ROLE_COUNTERPARTY_KEY, ROLE_MERCHANT_KEY, ROLE_LABEL, ROLE_WEIGHT, ROLE_TIME)

CATALOG_FILENAME = 'catalog.json'


class ColumnSerializer(serializers.Serializer):
    name = serializers.CharField()
    type = serializers.ChoiceField(choices=COLUMN_TYPES)
    role = serializers.ChoiceField(choices=COLUMN_ROLES, required=False, allow_null=True, default=None)


class TabularSourceSerializer(serializers.Serializer):
    id = serializers.CharField()
    path = serializers.CharField()
    row_count = serializers.IntegerField(required=False, allow_null=True, min_value=0, default=None)
    columns = ColumnSerializer(many=True)

    def validate_columns(self, value):
        names = [c['name'] for c in value]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise serializers.ValidationError('duplicate column names: %s' % ', '.join(duplicates))
        return value


class SourceCatalogSerializer(serializers.Serializer):
    sources = TabularSourceSerializer(many=True)

    def validate_sources(self, value):
        ids = [s['id'] for s in value]
        if len(set(ids)) != len(ids):
            raise serializers.ValidationError('source ids must be unique')
        if not value:
            raise serializers.ValidationError('the catalog lists no sources')
        return value


class Column(object):
    def __init__(self, name, type, role=None):
        self.name = name
        self.type = type
        self.role = role

    def to_data(self):
        return {'name': self.name, 'type': self.type, 'role': self.role}


class TabularSource(object):
    def __init__(self, id, path, columns, row_count=None):
        self.id = id
        self.path = path
        self.columns = [c if isinstance(c, Column) else Column(**c) for c in columns]
        self.row_count = row_count

    def column(self, name):
        for column in self.columns:
            if column.name == name:
                return column
        raise CatalogMismatch('source %r has no column %r' % (self.id, name), column=name, source=self.id)

    def columns_with_role(self, role):
        return [c for c in self.columns if c.role == role]

    def has_role(self, role):
        return bool(self.columns_with_role(role))

    def to_data(self):
        return {
            'id': self.id,
            'path': os.path.basename(self.path),
            'row_count': self.row_count,
            'columns': [c.to_data() for c in self.columns],
        }


class SourceCatalog(object):
    """
    The sidecar describing the raw tabular sources of one dataset directory.
    """

    def __init__(self, sources, base_dir=''):
        self.sources = list(sources)
        self.base_dir = base_dir

    def __iter__(self):
        return iter(self.sources)

    def __len__(self):
        return len(self.sources)

    def get(self, source_id):
        for source in self.sources:
            if source.id == source_id:
                return source
        raise CatalogMismatch('catalog has no source %r' % (source_id,), source=source_id)

    def to_data(self):
        return {'sources': [s.to_data() for s in self.sources]}

    @classmethod
    def from_data(cls, data, base_dir=''):
        serializer = SourceCatalogSerializer(data=data)
        if not serializer.is_valid():
            raise ConfigError('invalid source catalog: %s' % json.dumps(serializer.errors, sort_keys=True))
        sources = []
        for item in serializer.validated_data['sources']:
            sources.append(TabularSource(
                id=item['id'],
                path=os.path.join(base_dir, item['path']),
                columns=[dict(c) for c in item['columns']],
                row_count=item['row_count'],
            ))
        return cls(sources, base_dir=base_dir)


def load_catalog(data_dir):
    path = os.path.join(data_dir, CATALOG_FILENAME)
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError('no %s in %s' % (CATALOG_FILENAME, data_dir))
    except ValueError as e:
        raise ConfigError('%s is not valid JSON: %s' % (path, e))
    return SourceCatalog.from_data(data, base_dir=data_dir)
