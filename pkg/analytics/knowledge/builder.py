"""
Build a knowledge file from a documentation tree.

The tree is laid out as ``<category>/<family>/<algorithm>.md``. Directories may
carry a ``README.md`` whose title and first paragraph name and summarize them.
Algorithm documents start with ``# Name``, their first paragraph is the summary,
and ``- key: value`` bullets under ``## Attributes`` become the attribute map.
"""
import logging
import os

from analytics.exceptions import ParseError

from .graph import (
    ALGORITHM, CATEGORY, CONTAINS, FAMILY, REFINES, SUMMARY_MAX_LENGTH, VARIANT_OF, KnowledgeEdge, KnowledgeGraph,
    KnowledgeNode, KnowledgeSnapshot
)
from .loader import dump_knowledge

logger = logging.getLogger(__name__)

README = 'README.md'
LINK_ATTRIBUTES = {'variant_of': VARIANT_OF, 'refines': REFINES}


class MarkdownDoc(object):
    def __init__(self, title=None, summary='', attributes=None):
        self.title = title
        self.summary = summary
        self.attributes = attributes or {}


def parse_markdown(text):
    doc = MarkdownDoc()
    section = None
    paragraph = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith('# ') and doc.title is None:
            doc.title = stripped[2:].strip()
            continue
        if stripped.startswith('#'):
            section = stripped.lstrip('#').strip().lower()
            if paragraph and not doc.summary:
                doc.summary = ' '.join(paragraph)
            paragraph = []
            continue
        if section == 'attributes':
            if stripped.startswith('- ') and ':' in stripped:
                key, value = stripped[2:].split(':', 1)
                doc.attributes[key.strip()] = value.strip()
            continue
        if section is None and not doc.summary:
            if stripped:
                paragraph.append(stripped)
            elif paragraph:
                doc.summary = ' '.join(paragraph)
                paragraph = []
    if paragraph and not doc.summary:
        doc.summary = ' '.join(paragraph)
    doc.summary = doc.summary[:SUMMARY_MAX_LENGTH]
    return doc


def _read(path):
    try:
        with open(path, encoding='utf-8') as f:
            return parse_markdown(f.read())
    except OSError as e:
        raise ParseError('cannot read %s: %s' % (path, e))


def _subdirs(path):
    return sorted(name for name in os.listdir(path) if os.path.isdir(os.path.join(path, name)))


def _directory_node(path, node_id, level):
    readme = os.path.join(path, README)
    doc = _read(readme) if os.path.isfile(readme) else MarkdownDoc()
    name = doc.title or node_id.replace('_', ' ').replace('-', ' ').title()
    return KnowledgeNode(node_id, level, name, doc.summary or name, doc.attributes)


def build_knowledge(docs_dir, output_path=None):
    """
    Scan ``docs_dir`` into a knowledge graph; detail paths are made relative to the
    directory of ``output_path`` when one is given.
    """
    if not os.path.isdir(docs_dir):
        raise ParseError('%s is not a directory' % docs_dir)
    base_dir = os.path.dirname(os.path.abspath(output_path)) if output_path else os.path.abspath(docs_dir)
    nodes = []
    edges = []
    for category_id in _subdirs(docs_dir):
        category_dir = os.path.join(docs_dir, category_id)
        nodes.append(_directory_node(category_dir, category_id, CATEGORY))
        for family_id in _subdirs(category_dir):
            family_dir = os.path.join(category_dir, family_id)
            nodes.append(_directory_node(family_dir, family_id, FAMILY))
            edges.append(KnowledgeEdge(category_id, family_id, CONTAINS))
            for filename in sorted(os.listdir(family_dir)):
                if not filename.endswith('.md') or filename == README:
                    continue
                path = os.path.join(family_dir, filename)
                algorithm_id = filename[:-3]
                doc = _read(path)
                attributes = dict(doc.attributes)
                for key, relation in LINK_ATTRIBUTES.items():
                    for other in filter(None, (s.strip() for s in attributes.pop(key, '').split(','))):
                        edges.append(KnowledgeEdge(algorithm_id, other, relation))
                nodes.append(KnowledgeNode(
                    algorithm_id, ALGORITHM, doc.title or algorithm_id, doc.summary, attributes,
                    os.path.relpath(os.path.abspath(path), base_dir),
                ))
                edges.append(KnowledgeEdge(family_id, algorithm_id, CONTAINS))
    kg = KnowledgeGraph(KnowledgeSnapshot(nodes, edges, base_dir))
    logger.info('built knowledge base from %s: %d nodes, %d edges', docs_dir, len(nodes), len(edges))
    if output_path:
        dump_knowledge(kg, output_path)
    return kg
