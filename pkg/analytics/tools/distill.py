"""
Result distillation: reduce a raw result to budgeted, task-relevant evidence.

Distillation is a pure function of the raw result and the directive. What is
dropped is always counted in ``omitted_count``.
"""
import numpy as np
from django.conf import settings
from rest_framework import serializers

from analytics.algorithms.results import FlowSummary, plain
from analytics.exceptions import ModeMismatch

from .kinds import CYCLE_SET, NODE_SCORES, NODE_SET, SCALAR, TABLE
from .results import canonical_json

TOP_K = 'TopK'
THRESHOLD = 'Threshold'
SUBGRAPH_SUMMARY = 'SubgraphSummary'
HEAD = 'Head'
MODES = (TOP_K, THRESHOLD, SUBGRAPH_SUMMARY, HEAD)

COMPATIBLE_KINDS = {
    TOP_K: (NODE_SCORES,),
    THRESHOLD: (TABLE, NODE_SCORES),
    SUBGRAPH_SUMMARY: (CYCLE_SET, NODE_SET),
    HEAD: (TABLE, NODE_SCORES, SCALAR),
}

TRUNCATION_MARKER = ' ...[truncated]'
DEFAULT_BUDGET = {'max_items': 50, 'max_chars': 4000}


def budget_settings():
    return dict(DEFAULT_BUDGET, **getattr(settings, 'AAG_DISTILL_BUDGET', {}))


class DistillDirectiveSerializer(serializers.Serializer):
    mode = serializers.ChoiceField(choices=MODES)
    k = serializers.IntegerField(min_value=1, required=False, default=10)
    threshold = serializers.FloatField(required=False, allow_null=True, default=None)
    column = serializers.CharField(required=False, allow_null=True, default=None)
    max_paths = serializers.IntegerField(min_value=1, required=False, default=5)
    max_items = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    max_chars = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    focus = serializers.JSONField(required=False, allow_null=True, default=None)

    def validate(self, data):
        if data['mode'] == THRESHOLD and data.get('threshold') is None:
            raise serializers.ValidationError('Threshold mode needs a threshold')
        return data


class DistillDirective(object):
    def __init__(self, mode, k=10, threshold=None, column=None, max_paths=5, max_items=None, max_chars=None,
                 focus=None):
        budget = budget_settings()
        self.mode = mode
        self.k = k
        self.threshold = threshold
        self.column = column
        self.max_paths = max_paths
        self.max_items = budget['max_items'] if max_items is None else max_items
        self.max_chars = budget['max_chars'] if max_chars is None else max_chars
        self.focus = focus
        if self.mode not in MODES:
            raise ModeMismatch('unknown distillation mode %r' % (mode,))
        if self.max_items < 1 or self.max_chars < 1:
            raise ValueError('distillation budget must be positive')

    def replace(self, **changes):
        data = self.to_data()
        data.update(changes)
        return DistillDirective(**data)

    def to_data(self):
        return {
            'mode': self.mode,
            'k': self.k,
            'threshold': self.threshold,
            'column': self.column,
            'max_paths': self.max_paths,
            'max_items': self.max_items,
            'max_chars': self.max_chars,
            'focus': self.focus,
        }

    @classmethod
    def from_data(cls, data):
        serializer = DistillDirectiveSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return cls(**serializer.validated_data)


def default_directive(kind, **overrides):
    if kind == NODE_SCORES:
        directive = DistillDirective(TOP_K)
    elif kind in (CYCLE_SET, NODE_SET):
        directive = DistillDirective(SUBGRAPH_SUMMARY)
    else:
        directive = DistillDirective(HEAD)
    return directive.replace(**overrides) if overrides else directive


class DistilledResult(object):
    def __init__(self, summary_text, items, omitted_count, provenance):
        self.summary_text = summary_text
        self.items = list(items)
        self.omitted_count = omitted_count
        self.provenance = provenance

    def to_data(self):
        return {
            'summary_text': self.summary_text,
            'items': self.items,
            'omitted_count': self.omitted_count,
            'provenance': self.provenance,
        }


def _fmt(value):
    if isinstance(value, float):
        return '%.6g' % value
    return str(value)


def _same(a, b):
    return a == b or str(a) == str(b)


def _score_order(values):
    return np.lexsort((np.arange(len(values)), -values))


def _table_column(table, requested):
    if requested is not None:
        if requested not in table.columns:
            raise ModeMismatch('table has no column %r' % requested)
        return requested
    for name in ('weight', 'net'):
        if name in table.columns:
            return name
    return table.columns[-1]


#########
# Modes #
#########

def _top_k(scores, directive):
    order = _score_order(scores.values)
    items = [
        {'rank': rank + 1, 'node': plain(scores.keys[i]), 'score': float(scores.values[i])}
        for rank, i in enumerate(order[:directive.k].tolist())
    ]
    lines = ['%d. %s score=%s' % (it['rank'], it['node'], _fmt(it['score'])) for it in items]
    notes = []
    if directive.focus is not None:
        position = [i for i, n in enumerate(order.tolist()) if _same(scores.keys[n], directive.focus)]
        if position:
            i = position[0]
            notes.append('focus %s: rank %d of %d, score=%s'
                         % (directive.focus, i + 1, len(order), _fmt(float(scores.values[order[i]]))))
        else:
            notes.append('focus %s: not ranked' % directive.focus)
    if not scores.converged:
        notes.append('scores did not converge after %d iterations' % scores.iterations)
    return 'top %%d of %d nodes by score' % len(scores), items, lines, notes


def _threshold_scores(scores, directive):
    order = [i for i in _score_order(scores.values).tolist() if scores.values[i] >= directive.threshold]
    items = [{'node': plain(scores.keys[i]), 'score': float(scores.values[i])} for i in order]
    lines = ['%s score=%s' % (it['node'], _fmt(it['score'])) for it in items]
    return '%%d of %d nodes with score >= %s' % (len(scores), _fmt(directive.threshold)), items, lines, []


def _table_rows(table, rows, directive):
    items = [dict(zip(table.columns, (plain(v) for v in row))) for row in rows]
    lines = [', '.join('%s=%s' % (c, _fmt(item[c])) for c in table.columns) for item in items]
    notes = []
    if directive.focus is not None and isinstance(table, FlowSummary):
        row = table.row_for(str(directive.focus))
        if row is None:
            notes.append('focus %s: no flows' % directive.focus)
        else:
            notes.append('focus %s: in=%s (%d), out=%s (%d), net=%s' % (
                directive.focus, _fmt(row['in_total']), row['in_count'], _fmt(row['out_total']),
                row['out_count'], _fmt(row['net'])))
    return items, lines, notes


def _threshold_table(table, directive):
    column = _table_column(table, directive.column)
    i = table.columns.index(column)
    rows = [row for row in table.rows if row[i] is not None and row[i] >= directive.threshold]
    items, lines, notes = _table_rows(table, rows, directive)
    return '%%d of %d rows with %s >= %s' % (len(table), column, _fmt(directive.threshold)), items, lines, notes


def _head_table(table, directive):
    items, lines, notes = _table_rows(table, table.rows[:directive.k], directive)
    return 'first %%d of %d rows' % len(table), items, lines, notes


def _head_scores(scores, directive):
    items = [{'node': plain(k), 'value': float(v)} for k, v in list(zip(scores.keys, scores.values))[:directive.k]]
    lines = ['%s=%s' % (it['node'], _fmt(it['value'])) for it in items]
    notes = []
    if scores.labeling and len(scores):
        labels, counts = np.unique(scores.values, return_counts=True)
        notes.append('%d components, largest has %d nodes' % (len(labels), int(counts.max())))
    return 'first %%d of %d nodes' % len(scores), items, lines, notes


def _head_scalar(scalar, directive):
    items = [{'value': plain(scalar.value)}]
    return 'value (%d item)', items, ['%s' % _fmt(scalar.value)], []


def _cycle_summary(cycles, directive):
    order = sorted(range(len(cycles)), key=lambda i: len(cycles.cycles[i]))
    items = []
    for i in order[:directive.max_paths]:
        item = {'cycle': [plain(n) for n in cycles.cycles[i]], 'length': len(cycles.cycles[i])}
        if cycles.flows is not None:
            item['bottleneck'] = cycles.bottleneck(i)
            item['total'] = cycles.total(i)
        items.append(item)
    lines = []
    for it in items:
        line = ' -> '.join(str(n) for n in it['cycle'])
        if 'total' in it:
            line += ' (bottleneck=%s, total=%s)' % (_fmt(it['bottleneck']), _fmt(it['total']))
        lines.append(line)
    notes = ['%d distinct nodes, %d distinct edges' % (len(cycles.node_union()), len(cycles.pairs()))]
    if cycles.flows is not None and len(cycles):
        bottlenecks = [cycles.bottleneck(i) for i in range(len(cycles))]
        totals = [cycles.total(i) for i in range(len(cycles))]
        notes.append('bottleneck range %s..%s, total flow range %s..%s' % (
            _fmt(min(bottlenecks)), _fmt(max(bottlenecks)), _fmt(min(totals)), _fmt(max(totals))))
    if cycles.truncated:
        notes.append('enumeration hit the cycle cap, more cycles exist')
    if directive.focus is not None:
        hits = sum(1 for c in cycles.cycles if any(_same(n, directive.focus) for n in c))
        notes.append('focus %s: in %d of %d cycles' % (directive.focus, hits, len(cycles)))
    return '%%d of %d cycles, shortest first' % len(cycles), items, lines, notes


def _node_summary(nodes, directive):
    items = []
    for i, node in enumerate(nodes.nodes):
        item = {'node': plain(node)}
        if nodes.scores is not None:
            item['score'] = nodes.scores[i]
        items.append(item)
    lines = [str(it['node']) + (' score=%s' % _fmt(it['score']) if 'score' in it else '') for it in items]
    notes = []
    if nodes.edge_count is not None:
        notes.append('%d induced edges' % nodes.edge_count)
    if directive.focus is not None:
        present = any(_same(n, directive.focus) for n in nodes.nodes)
        notes.append('focus %s: %s' % (directive.focus, 'member' if present else 'not a member'))
    return '%%d of %d nodes' % len(nodes), items, lines, notes


_HANDLERS = {
    (TOP_K, NODE_SCORES): _top_k,
    (THRESHOLD, NODE_SCORES): _threshold_scores,
    (THRESHOLD, TABLE): _threshold_table,
    (HEAD, TABLE): _head_table,
    (HEAD, NODE_SCORES): _head_scores,
    (HEAD, SCALAR): _head_scalar,
    (SUBGRAPH_SUMMARY, CYCLE_SET): _cycle_summary,
    (SUBGRAPH_SUMMARY, NODE_SET): _node_summary,
}


def _render(title, header, lines, notes, omitted):
    parts = ['%s: %s' % (title, header)]
    parts.extend(lines)
    if omitted:
        parts.append('(%d more omitted)' % omitted)
    parts.extend(notes)
    return '\n'.join(parts)


def _truncate(text, max_chars):
    if len(text) <= max_chars:
        return text
    return (text[:max(0, max_chars - len(TRUNCATION_MARKER))] + TRUNCATION_MARKER)[:max_chars]


def distill(raw, directive):
    """
    Distill ``raw`` under ``directive``.

    Items are dropped from the end until both the summary text and the item list
    fit ``max_chars``; a summary that still does not fit is cut with a marker.
    """
    handler = _HANDLERS.get((directive.mode, raw.kind))
    if handler is None:
        raise ModeMismatch('%s cannot distill a %s result' % (directive.mode, raw.kind))
    header, items, lines, notes = handler(raw.payload, directive)
    items = items[:directive.max_items]
    lines = lines[:len(items)]
    raw_count = raw.payload.item_count
    title = raw.tool or raw.kind

    while True:
        text = _render(title, header % len(items), lines, notes, raw_count - len(items))
        fits = len(text) <= directive.max_chars and len(canonical_json(items)) <= directive.max_chars
        if fits or not items:
            break
        items = items[:-1]
        lines = lines[:-1]

    return DistilledResult(
        _truncate(text, directive.max_chars), items, raw_count - len(items),
        {'tool': raw.tool, 'directive': directive.to_data()},
    )
