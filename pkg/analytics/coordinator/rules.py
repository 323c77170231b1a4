"""
Rule table of the mock coordinator.

Every role is answered by a pure function of the request payload, keyed by the
normalized keywords of the intent. Changing any answer bumps ``RULES_VERSION``.
"""
import re

from analytics.construction.catalog import SourceCatalog
from analytics.construction.schema import TEMPLATE_MONEY_FLOW, TEMPLATE_PURCHASE, schema_from_template

from .schemas import PLAN, REFINE, REPORT, SCHEMA

RULES_VERSION = 1

FOCUS_PATTERN = re.compile(r'\b([A-Z][a-z]+(?: [A-Z][a-z]+)+)\b')
WORD_PATTERN = re.compile(r'[a-z0-9]+')
LEADING_WORDS = {
    'is', 'was', 'does', 'did', 'has', 'can', 'could', 'should', 'please', 'find', 'identify', 'show',
    'rank', 'summarize', 'who', 'what', 'which', 'how', 'check', 'tell', 'list', 'detect',
}

AML_WORDS = {'laundering', 'launder', 'aml', 'fraud', 'illicit'}
PURCHASE_WORDS = {'purchase', 'purchases', 'recommend', 'recommendation', 'merchant', 'merchants', 'buy'}
COMMUNITY_WORDS = {'community', 'communities', 'cluster', 'clusters', 'modularity'}
RANK_WORDS = {'rank', 'ranking', 'important', 'importance', 'influential', 'central'}
CYCLE_WORDS = {'cycle', 'cycles', 'loop', 'loops', 'circular'}
COMPONENT_WORDS = {'component', 'components', 'connected', 'connectivity'}
NEIGHBORHOOD_WORDS = {'neighborhood', 'neighbourhood', 'neighbors', 'neighbours', 'hop', 'hops'}
FLOW_WORDS = {'summarize', 'summary', 'flow', 'flows', 'incoming', 'outgoing'}

PARAM_ERRORS = ('ParameterOutOfRange', 'LengthBoundError', 'SchemaViolation')

DEFAULT_THRESHOLD = 10000.0


def keywords(text):
    return set(WORD_PATTERN.findall((text or '').lower()))


def extract_focus(text):
    """
    The first capitalized multi-word name in ``text`` ("Anna Lee"), or None.

    Question words that only carry a capital because they open the sentence are
    not part of the name.
    """
    for match in FOCUS_PATTERN.finditer(text or ''):
        words = match.group(1).split()
        while words and words[0].lower() in LEADING_WORDS:
            words.pop(0)
        if len(words) > 1:
            return ' '.join(words)
    return None


def match_schema_template(task):
    if keywords(task) & PURCHASE_WORDS:
        return TEMPLATE_PURCHASE
    return TEMPLATE_MONEY_FLOW


##########
# Schema #
##########

def schema_response(payload):
    catalog = SourceCatalog.from_data(payload['catalog'])
    return schema_from_template(match_schema_template(payload['task']), catalog).to_data()


########
# Plan #
########

def _dataset(payload):
    datasets = payload.get('datasets') or {}
    if 'transfer' in datasets:
        return 'transfer'
    return sorted(datasets)[0] if datasets else None


def _source(label):
    return {'kind': 'SourceDataset', 'ref': label}


def _stage(id, goal, family, tool, bindings, params=None, directive=None, gate=None):
    return {
        'id': id,
        'goal': goal,
        'suggested_family': family,
        'suggested_tool': tool,
        'bindings': bindings,
        'params': params or {},
        'directive': directive,
        'gate': gate,
    }


def _aml_stages(label, focus, threshold):
    who = focus or 'any account'
    gate = {'producer': 'risk_ranking', 'test': 'above_mean', 'value': focus} if focus else None
    cycle_params = {'min_weight': threshold, 'max_len': 5, 'min_len': 3}
    summary_params = {}
    if focus:
        cycle_params['anchor'] = focus
        summary_params['focus'] = focus
    return [
        _stage('risk_ranking', 'rank accounts by weighted transfer importance to assess whether %s is high risk' % who,
               'ranking', 'pagerank', {'graph': _source(label)}, {'weighted': True},
               {'mode': 'TopK', 'k': 10, 'focus': focus}),
        _stage('cycle_detection', 'find high value money laundering cycles through %s' % who,
               'cycle_detection', 'enumerate_cycles', {'graph': _source(label)}, cycle_params,
               {'mode': 'SubgraphSummary', 'max_paths': 25, 'focus': focus}, gate),
        _stage('flow_estimation', 'estimate the illicit amounts transferred along the detected cycles',
               'flow_aggregation', 'aggregate_flows',
               {'table': {'kind': 'StageOutput', 'ref': 'cycle_detection', 'selector': 'edges'}},
               {'min_amount': threshold}, {'mode': 'Head', 'k': 25}),
        _stage('transaction_summary', 'summarize incoming and outgoing transactions of %s' % who,
               'flow_aggregation', 'aggregate_flows', {'table': _source(label)}, summary_params,
               {'mode': 'Head', 'k': 10, 'focus': focus}, gate),
    ]


def plan_stages(payload):
    words = keywords(payload['query'])
    focus = extract_focus(payload['query'])
    label = _dataset(payload)
    if label is None:
        return {'stages': []}
    graph = {'graph': _source(label)}

    if words & AML_WORDS:
        threshold = float(payload.get('high_value_threshold') or DEFAULT_THRESHOLD)
        return {'stages': _aml_stages(label, focus, threshold)}
    if words & COMMUNITY_WORDS:
        return {'stages': [_stage('communities', 'group accounts into densely connected communities',
                                  'community', None, graph)]}
    if words & RANK_WORDS:
        return {'stages': [_stage('ranking', 'rank all accounts by importance', 'ranking', 'pagerank', graph)]}
    if words & CYCLE_WORDS:
        params = {'anchor': focus} if focus else {}
        return {'stages': [_stage('cycles', 'find directed cycles of transfers', 'cycle_detection',
                                  'enumerate_cycles', graph, params)]}
    if words & COMPONENT_WORDS:
        params = {'mode': 'strong'} if words & {'strong', 'strongly'} else {}
        return {'stages': [_stage('components', 'split accounts into connected components', 'connectivity',
                                  'connected_components', graph, params)]}
    if words & NEIGHBORHOOD_WORDS and focus:
        bindings = dict(graph, seeds={'kind': 'Literal', 'ref': [focus]})
        return {'stages': [_stage('neighborhood', 'accounts within a few transfers of %s' % focus, 'neighborhood',
                                  'khop', bindings)]}
    if words & FLOW_WORDS:
        params = {'focus': focus} if focus else {}
        return {'stages': [_stage('flows', 'summarize incoming and outgoing flows per account', 'flow_aggregation',
                                  'aggregate_flows', {'table': _source(label)}, params)]}
    return {'stages': []}


##########
# Refine #
##########

def _refine_node(feedback, node):
    detail = feedback['detail']
    if feedback['outcome'] == 'Error':
        param = detail.get('param')
        if detail.get('error') in PARAM_ERRORS and param in node['defaults']:
            return {'action': 'reset_param', 'node': node['id'], 'param': param}
        if node['variants']:
            return {'action': 'substitute_tool', 'node': node['id'], 'tool': node['variants'][0]}
        return {'action': 'reset_param', 'node': node['id'], 'param': None}
    if node['adapter']:
        return {'action': 'remove_adapter', 'node': node['id']}
    if not node['revision'] and node['variants']:
        return {'action': 'substitute_tool', 'node': node['id'], 'tool': node['variants'][0]}
    return None


def refine_actions(payload):
    nodes = {node['id']: node for node in payload['nodes']}
    actions = []
    for feedback in payload['feedback']:
        node = nodes.get(feedback['node_id'])
        if node is None:
            continue
        action = _refine_node(feedback, node)
        if action is not None:
            actions.append(action)
    return {'actions': actions}


##########
# Report #
##########

def report_narrative(payload):
    stages = payload['stages']
    done = [s for s in stages if s['status'] == 'Ok']
    skipped = [s for s in stages if s['status'] == 'Skipped']
    summary = 'Analysis of "%s": %d of %d stages produced evidence' % (payload['query'], len(done), len(stages))
    if skipped:
        summary += ', %d skipped by a decision gate' % len(skipped)
    sections = []
    for stage in done:
        headline = stage['summary_text'].split('\n', 1)[0]
        sections.append({'stage': stage['id'], 'text': ('%s. %s' % (stage['goal'], headline))[:2000]})
    return {'summary': summary + '.', 'sections': sections, 'directives': {}}


RULES = {
    PLAN: plan_stages,
    SCHEMA: schema_response,
    REFINE: refine_actions,
    REPORT: report_narrative,
}
