"""
The run directory and the write-once stage store.
"""
import json
import logging
import os
import threading

from analytics.exceptions import ExecutionError
from analytics.tools.results import canonical_json

logger = logging.getLogger(__name__)

OK = 'Ok'
ERROR = 'Error'
LOW_QUALITY = 'LowQuality'
SKIPPED = 'Skipped'
STATUSES = (OK, ERROR, LOW_QUALITY, SKIPPED)

# keys of stage.json that differ between otherwise identical runs
TIMING_FIELDS = ('started', 'finished', 'elapsed')


class RunDirectory(object):
    def __init__(self, path):
        self.path = path
        os.makedirs(path, exist_ok=True)

    def join(self, *parts):
        return os.path.join(self.path, *parts)

    def write_json(self, name, data):
        path = self.join(name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as fp:
            json.dump(json.loads(canonical_json(data)), fp, indent=2, sort_keys=True, ensure_ascii=False)
            fp.write('\n')
        return path

    def write_text(self, name, text):
        path = self.join(name)
        with open(path, 'w', encoding='utf-8') as fp:
            fp.write(text)
        return path

    def read_json(self, name):
        with open(self.join(name), encoding='utf-8') as fp:
            return json.load(fp)

    def exists(self, name):
        return os.path.exists(self.join(name))


class StageOutput(object):
    """
    What one executed (or skipped) DAG node left behind.
    """

    def __init__(self, node_id, tool, status, raw=None, distilled=None, error=None, gate=None, round=0,
                 started=None, finished=None):
        if status not in STATUSES:
            raise ValueError('unknown stage status %r' % (status,))
        self.node_id = node_id
        self.tool = tool
        self.status = status
        self.raw = raw
        self.distilled = distilled
        self.error = error
        self.gate = gate
        self.round = round
        self.started = started
        self.finished = finished

    @property
    def ok(self):
        return self.status == OK

    @property
    def elapsed(self):
        if self.started is None or self.finished is None:
            return None
        return round(self.finished - self.started, 6)

    def accepted(self):
        """
        This output with its LowQuality verdict overruled.
        """
        return StageOutput(self.node_id, self.tool, OK, self.raw, self.distilled, self.error, self.gate,
                           self.round, self.started, self.finished)

    def to_data(self):
        return {
            'node_id': self.node_id,
            'tool': self.tool,
            'status': self.status,
            'stats': self.raw.stats if self.raw is not None else None,
            'omitted_count': self.distilled.omitted_count if self.distilled is not None else None,
            'error': self.error,
            'gate': self.gate,
            'round': self.round,
            'started': self.started,
            'finished': self.finished,
            'elapsed': self.elapsed,
        }

    def __repr__(self):
        return '<StageOutput %s %s>' % (self.node_id, self.status)


class StageStore(object):
    """
    Single-writer store of stage outputs keyed by node id. An output is never
    replaced once written; readers may look up concurrently.
    """

    def __init__(self, run_dir=None):
        self.run_dir = run_dir
        self._outputs = {}
        self._lock = threading.Lock()

    def __contains__(self, node_id):
        return node_id in self._outputs

    def __len__(self):
        return len(self._outputs)

    def get(self, node_id):
        return self._outputs.get(node_id)

    def put(self, output):
        with self._lock:
            if output.node_id in self._outputs:
                raise ExecutionError('stage output of %r is already stored' % (output.node_id,),
                                     node=output.node_id)
            self._outputs[output.node_id] = output
        if self.run_dir is not None:
            self._persist(output)
        logger.info('stage %s: %s', output.node_id, output.status)
        return output

    def _persist(self, output):
        prefix = os.path.join('stages', output.node_id)
        if output.raw is not None:
            self.run_dir.write_json(os.path.join(prefix, 'raw.json'), output.raw.to_data())
        if output.distilled is not None:
            self.run_dir.write_json(os.path.join(prefix, 'distilled.json'), output.distilled.to_data())
        self.run_dir.write_json(os.path.join(prefix, 'stage.json'), output.to_data())

    def outputs(self):
        return [self._outputs[node_id] for node_id in sorted(self._outputs)]
