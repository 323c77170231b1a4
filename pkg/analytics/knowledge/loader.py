import json
import logging
import os

from rest_framework import serializers

from analytics.exceptions import ParseError

from .graph import (
    LEVELS, RELATIONS, SUMMARY_MAX_LENGTH, KnowledgeEdge, KnowledgeGraph, KnowledgeNode, KnowledgeSnapshot
)

logger = logging.getLogger(__name__)


class KnowledgeNodeSerializer(serializers.Serializer):
    id = serializers.CharField()
    level = serializers.ChoiceField(choices=LEVELS)
    name = serializers.CharField()
    summary = serializers.CharField(max_length=SUMMARY_MAX_LENGTH, allow_blank=True, required=False, default='')
    attributes = serializers.DictField(required=False, default=dict)
    detail_path = serializers.CharField(required=False, allow_null=True, default=None)
    usefulness = serializers.FloatField(required=False, default=1.0)


class KnowledgeEdgeSerializer(serializers.Serializer):
    src = serializers.CharField()
    dst = serializers.CharField()
    relation = serializers.ChoiceField(choices=RELATIONS)


class KnowledgeFileSerializer(serializers.Serializer):
    nodes = KnowledgeNodeSerializer(many=True, required=False, default=list)
    edges = KnowledgeEdgeSerializer(many=True, required=False, default=list)


def parse_knowledge(data, base_dir=''):
    serializer = KnowledgeFileSerializer(data=data)
    if not serializer.is_valid():
        raise ParseError('malformed knowledge file: %s' % json.dumps(serializer.errors, sort_keys=True))
    validated = serializer.validated_data
    nodes = []
    seen = set()
    for item in validated['nodes']:
        if item['id'] in seen:
            raise ParseError('knowledge node %r is declared twice' % item['id'])
        seen.add(item['id'])
        nodes.append(KnowledgeNode(
            item['id'], item['level'], item['name'], item['summary'], item['attributes'],
            item['detail_path'], item['usefulness'],
        ))
    edges = [KnowledgeEdge(e['src'], e['dst'], e['relation']) for e in validated['edges']]
    return KnowledgeSnapshot(nodes, edges, base_dir)


def load_knowledge(path):
    """
    Load and validate a knowledge file; an empty file is an empty knowledge base.
    """
    base_dir = os.path.dirname(os.path.abspath(path))
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ParseError('cannot read knowledge file %s: %s' % (path, e))
    if not text.strip():
        return KnowledgeGraph(KnowledgeSnapshot(base_dir=base_dir))
    try:
        data = json.loads(text)
    except ValueError as e:
        raise ParseError('%s is not valid JSON: %s' % (path, e))
    if not isinstance(data, dict):
        raise ParseError('%s must hold an object with "nodes" and "edges"' % path)
    snapshot = parse_knowledge(data, base_dir)
    logger.info('loaded %d knowledge nodes and %d edges from %s', len(snapshot.nodes), len(snapshot.edges), path)
    return KnowledgeGraph(snapshot)


def dump_knowledge(kg, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(kg.snapshot().to_data(), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')
