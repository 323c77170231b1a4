import math
import re
from collections import Counter

_PUNCTUATION = re.compile(r'[^\w\s]')

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


def tokenize(text):
    """
    Lowercased, punctuation-stripped, whitespace-split tokens.
    """
    return _PUNCTUATION.sub(' ', (text or '').lower()).split()


class Scorer(object):
    """
    Lexical relevance of a query against a fixed corpus of token lists.

    Subclasses return one non-negative score per corpus document, in corpus order.
    """

    def __init__(self, corpus):
        self.corpus = [list(doc) for doc in corpus]

    def scores(self, query_tokens):
        raise NotImplementedError


class BM25Scorer(Scorer):
    def __init__(self, corpus, k1=DEFAULT_K1, b=DEFAULT_B):
        super().__init__(corpus)
        self.k1 = k1
        self.b = b
        self.doc_len = [len(doc) for doc in self.corpus]
        self.n_docs = len(self.corpus)
        self.avgdl = (sum(self.doc_len) / self.n_docs) if self.n_docs else 0.0

        df = Counter()
        for doc in self.corpus:
            df.update(set(doc))
        self.idf = {word: math.log((self.n_docs - count + 0.5) / (count + 0.5) + 1) for word, count in df.items()}
        self.tf = [Counter(doc) for doc in self.corpus]

    def scores(self, query_tokens):
        result = []
        for doc_tf, dl in zip(self.tf, self.doc_len):
            score = 0.0
            norm = 1 - self.b + (self.b * dl / self.avgdl if self.avgdl else 0.0)
            for word in query_tokens:
                tf = doc_tf.get(word)
                if tf:
                    score += self.idf[word] * (tf * (self.k1 + 1)) / (tf + self.k1 * norm)
            result.append(score)
        return result
