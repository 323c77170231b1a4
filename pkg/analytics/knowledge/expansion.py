import glob
import json
import logging
import os

from .graph import ALGORITHM
from .scoring import tokenize

logger = logging.getLogger(__name__)

EXPANSION_PATTERN = 'expansion-%d.json'


class ExpansionRequest(object):
    """
    A record of knowledge the base could not supply.

    Requests are only persisted; nothing is fetched.
    """

    def __init__(self, query, keywords, task_id=None, known_algorithms=()):
        self.query = query
        self.keywords = list(keywords)
        self.task_id = task_id
        self.known_algorithms = list(known_algorithms)

    def to_data(self):
        return {
            'query': self.query,
            'keywords': self.keywords,
            'task_id': self.task_id,
            'known_algorithms': self.known_algorithms,
        }


def expand_stub(kg, query, task_id=None, run_dir=None):
    """
    Describe what ``query`` asks for beyond the knowledge base's vocabulary and
    write it to ``run_dir`` as the next ``expansion-<n>.json``.
    """
    snapshot = kg.snapshot()
    vocabulary = set()
    for node in snapshot.nodes.values():
        vocabulary.update(tokenize(node.name))
        vocabulary.update(tokenize(node.summary))
    keywords = []
    for token in tokenize(query):
        if token not in vocabulary and token not in keywords:
            keywords.append(token)
    request = ExpansionRequest(query, keywords, task_id, [n.id for n in snapshot.by_level(ALGORITHM)])
    if run_dir is not None:
        number = len(glob.glob(os.path.join(run_dir, EXPANSION_PATTERN.replace('%d', '*')))) + 1
        path = os.path.join(run_dir, EXPANSION_PATTERN % number)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(request.to_data(), f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write('\n')
        logger.info('knowledge expansion request written to %s', path)
    return request
