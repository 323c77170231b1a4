"""
Run reports: a narrative from the coordinator around evidence blocks the
pipeline builds itself.

Evidence only ever comes from stored Ok outputs, so every section a report
carries cites a stage that exists and succeeded.
"""
import logging

from rest_framework import serializers

from analytics.algorithms.results import CycleSet, plain
from analytics.coordinator import REPORT, CoordinatorRequest
from analytics.exceptions import AnalyticsError
from analytics.tools.distill import DistillDirective, distill

from .store import OK, SKIPPED

logger = logging.getLogger(__name__)

REPORT_VERSION = 1


class Report(object):
    def __init__(self, query, summary, stages, sections, flagged_cycles=(), followups=None, plan_ref='plan.json'):
        self.query = query
        self.summary = summary
        self.stages = list(stages)
        self.sections = dict(sections)
        self.flagged_cycles = list(flagged_cycles)
        self.followups = dict(followups or {})
        self.plan_ref = plan_ref

    def evidence(self):
        return [stage for stage in self.stages if stage['status'] == OK]

    def cited(self):
        return sorted(self.sections)

    def to_data(self):
        return {
            'version': REPORT_VERSION,
            'query': self.query,
            'plan': self.plan_ref,
            'summary': self.summary,
            'stages': self.stages,
            'sections': [{'stage': stage_id, 'text': self.sections[stage_id]} for stage_id in self.cited()],
            'flagged_cycles': self.flagged_cycles,
            'followups': self.followups,
        }

    def to_markdown(self):
        lines = ['# Analysis report', '', '**Query:** %s' % self.query, '', '## Summary', '', self.summary, '']
        lines.extend(['## Stages', ''])
        for number, stage in enumerate(self.stages, 1):
            lines.append('### %d. %s (%s)' % (number, stage['stage'], stage['tool']))
            lines.append('')
            lines.append('*%s*' % stage['goal'])
            lines.append('')
            if stage['status'] == OK:
                if stage['stage'] in self.sections:
                    lines.extend([self.sections[stage['stage']], ''])
                lines.extend(['```', stage['summary_text'], '```', ''])
                if stage['omitted_count']:
                    lines.extend(['%d further items omitted.' % stage['omitted_count'], ''])
            else:
                lines.extend(['Status: %s. %s' % (stage['status'], stage.get('reason') or ''), ''])
                if stage.get('evidence'):
                    lines.extend(['```', stage['evidence'], '```', ''])
        if self.flagged_cycles:
            lines.extend(['## Flagged cycles', ''])
            for cycle in self.flagged_cycles:
                lines.append('- %s (stage %s, bottleneck=%s, total=%s)' % (
                    ' -> '.join(str(n) for n in cycle['cycle']), cycle['stage'], cycle['bottleneck'], cycle['total']))
            lines.append('')
        lines.append('Plan: `%s`' % self.plan_ref)
        return '\n'.join(lines) + '\n'


def _stage_block(node, output):
    block = {
        'stage': node.id,
        'tool': node.tool_name,
        'goal': node.goal,
        'status': output.status if output is not None else SKIPPED,
    }
    if output is not None and output.status == OK:
        block.update({
            'summary_text': output.distilled.summary_text,
            'items': output.distilled.items,
            'omitted_count': output.distilled.omitted_count,
            'provenance': output.distilled.provenance,
        })
    elif output is not None and output.gate:
        block.update({
            'reason': output.gate.get('reason'),
            'gate': {k: output.gate[k] for k in ('producer', 'test', 'value', 'verdict') if k in output.gate},
            'evidence': output.gate.get('evidence'),
        })
    elif output is not None:
        block['reason'] = (output.error or {}).get('message')
    return block


def flagged_cycles(dag, store):
    cycles = []
    for node in dag.nodes:
        output = store.get(node.id)
        if output is None or output.status != OK or not isinstance(output.raw.payload, CycleSet):
            continue
        payload = output.raw.payload
        for i, cycle in enumerate(payload.cycles):
            entry = {'stage': node.id, 'cycle': [plain(n) for n in cycle], 'length': len(cycle)}
            if payload.flows is not None:
                entry['bottleneck'] = payload.bottleneck(i)
                entry['total'] = payload.total(i)
            else:
                entry['bottleneck'] = entry['total'] = None
            cycles.append(entry)
    return cycles


def _followups(directives, dag, store):
    followups = {}
    for stage_id in sorted(directives):
        output = store.get(stage_id)
        if output is None or output.status != OK:
            logger.info('report directive for %s ignored: no Ok output', stage_id)
            continue
        try:
            directive = DistillDirective.from_data(directives[stage_id])
            followups[stage_id] = distill(output.raw, directive).to_data()
        except (serializers.ValidationError, AnalyticsError, ValueError) as e:
            logger.info('report directive for %s ignored: %s', stage_id, e)
    return followups


def build_report(query, dag, store, coordinator, plan_ref='plan.json'):
    """
    Assemble the report of a finished run.
    """
    stages = [_stage_block(node, store.get(node.id)) for node in dag.nodes]
    payload = {
        'query': query,
        'stages': [
            {k: stage.get(k) for k in ('stage', 'tool', 'goal', 'status', 'summary_text', 'reason')}
            for stage in stages
        ],
    }
    for entry in payload['stages']:
        entry['id'] = entry.pop('stage')
    response = coordinator.complete(CoordinatorRequest(REPORT, payload))

    ok = {stage['stage'] for stage in stages if stage['status'] == OK}
    sections = {}
    for section in response.value['sections']:
        if section['stage'] not in ok:
            logger.warning('report section for %r dropped: no Ok stage by that id', section['stage'])
            continue
        sections[section['stage']] = section['text']
    return Report(
        query, response.value['summary'], stages, sections, flagged_cycles(dag, store),
        _followups(response.value['directives'], dag, store), plan_ref,
    )
