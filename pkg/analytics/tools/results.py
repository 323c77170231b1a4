import json

from analytics.exceptions import SchemaViolation

from .kinds import kind_of


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=False, default=str)


class InvocationRequest(object):
    def __init__(self, tool, inputs=None, params=None):
        self.tool = tool
        self.inputs = dict(inputs or {})
        self.params = dict(params or {})


class RawResult(object):
    """
    The undistilled output of one invocation and its size accounting.
    """

    def __init__(self, kind, payload, tool=None):
        if kind_of(payload) != kind:
            raise SchemaViolation('payload is %s, not %s' % (kind_of(payload), kind), expected=kind,
                                  given=kind_of(payload))
        self.kind = kind
        self.payload = payload
        self.tool = tool
        self._data = None

    def payload_data(self):
        if self._data is None:
            self._data = self.payload.to_data()
        return self._data

    @property
    def stats(self):
        return {
            'item_count': self.payload.item_count,
            'byte_size': len(canonical_json(self.payload_data()).encode('utf-8')),
        }

    def to_data(self):
        return {'kind': self.kind, 'tool': self.tool, 'stats': self.stats, 'payload': self.payload_data()}
