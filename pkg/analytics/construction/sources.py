import logging

import pandas as pd

from analytics.exceptions import CatalogMismatch, ConfigError, ExtractionError

logger = logging.getLogger(__name__)


class SourceFrames(object):
    """
    Raw string-typed frames of the sources a schema needs.

    Only the schema's columns are ever read from disk; ``columns_read`` records
    them per source.
    """

    def __init__(self, frames=None, columns_read=None):
        self.frames = dict(frames or {})
        self.columns_read = dict(columns_read or {})

    def __getitem__(self, source_id):
        return self.frames[source_id]

    def __contains__(self, source_id):
        return source_id in self.frames

    @classmethod
    def from_rows(cls, source_id, columns, rows):
        """
        Build frames from in-memory rows, handy for tests and the wire codec.
        """
        frame = pd.DataFrame([[str(v) for v in row] for row in rows], columns=list(columns), dtype=str)
        return cls({source_id: frame}, {source_id: list(columns)})

    def add(self, source_id, frame):
        self.frames[source_id] = frame
        self.columns_read[source_id] = list(frame.columns)


def _first_invalid_byte(path):
    with open(path, 'rb') as fp:
        data = fp.read()
    try:
        data.decode('utf-8')
    except UnicodeDecodeError as e:
        return e.start, data.count(b'\n', 0, e.start) + 1
    return None, None


def read_source(source, columns):
    try:
        frame = pd.read_csv(
            source.path, usecols=list(columns), dtype=str, keep_default_na=False, encoding='utf-8',
        )
    except FileNotFoundError:
        raise ConfigError('source file %s does not exist' % source.path)
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame({name: pd.Series([], dtype=str) for name in columns})
    except UnicodeDecodeError as e:
        offset, line = _first_invalid_byte(source.path)
        raise ExtractionError('%s is not valid UTF-8 at byte %s (line %s)' % (source.path, offset, line),
                              source=source.id, offset=offset, line=line) from e
    except ValueError as e:
        # usecols names a column that the header lacks
        raise CatalogMismatch('%s: %s' % (source.path, e), source=source.id)
    return frame[list(columns)]


def read_sources(catalog, schema):
    frames = SourceFrames()
    for source_id in schema.sources():
        columns = schema.columns_for(source_id)
        frame = read_source(catalog.get(source_id), columns)
        logger.info('read %d rows × %d columns from %s', len(frame), len(columns), source_id)
        frames.add(source_id, frame)
    return frames
