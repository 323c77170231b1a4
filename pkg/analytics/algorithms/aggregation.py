import math

import numpy as np

from analytics.exceptions import MissingWeightColumn, ParameterOutOfRange

from .results import FlowSummary

CENT_TOLERANCE = 1e-6


def _group_totals(inverse, amounts, size):
    """
    Per-group sums. Amounts that are whole cents are summed as integers so totals
    are exact; anything else falls back to correctly rounded float sums.
    """
    cents = np.rint(amounts * 100.0)
    if np.all(np.abs(amounts * 100.0 - cents) <= CENT_TOLERANCE):
        totals = np.zeros(size, dtype=np.int64)
        np.add.at(totals, inverse, cents.astype(np.int64))
        return [int(t) / 100.0 for t in totals]
    buckets = [[] for _ in range(size)]
    for i, amount in zip(inverse.tolist(), amounts.tolist()):
        buckets[i].append(amount)
    return [math.fsum(b) for b in buckets]


def aggregate_flows(table, group=None, focus=None, min_amount=None):
    """
    Incoming and outgoing totals per node of ``group`` over an edge table.

    When ``group`` names only one side of a bipartite relation, only that side's
    flows are counted. Rows come back ordered by group key.
    """
    if table.weights is None:
        raise MissingWeightColumn('aggregate_flows needs an amount column on %r' % (table.relation,))
    sides = ('out', 'in')
    if group is not None and table.src_label != table.dst_label:
        if group == table.src_label:
            sides = ('out',)
        elif group == table.dst_label:
            sides = ('in',)
        else:
            raise ParameterOutOfRange('group %r is not an endpoint of the table' % (group,), param='group')

    keep = np.ones(len(table), dtype=bool)
    if min_amount is not None:
        keep &= table.weights >= min_amount
    amounts = table.weights[keep]
    key_columns = {'out': table.sources[keep], 'in': table.targets[keep]}
    if focus is not None:
        focus = table.resolve(focus)

    keys = np.concatenate([key_columns[side] for side in sides]) if len(amounts) else np.array([], dtype=object)
    if not len(keys):
        return FlowSummary([])
    groups, inverse = np.unique(keys.astype(str), return_inverse=True)
    inverse = inverse.reshape(-1)
    n_rows = len(amounts)
    totals = {}
    for offset, side in enumerate(sides):
        part = inverse[offset * n_rows:(offset + 1) * n_rows]
        totals[side] = (
            _group_totals(part, amounts, len(groups)),
            np.bincount(part, minlength=len(groups)).tolist(),
        )
    zero = ([0.0] * len(groups), [0] * len(groups))
    in_totals, in_counts = totals.get('in', zero)
    out_totals, out_counts = totals.get('out', zero)

    rows = []
    for i, key in enumerate(groups.tolist()):
        if focus is not None and key != str(focus):
            continue
        rows.append((key, in_totals[i], out_totals[i], in_counts[i], out_counts[i], in_totals[i] - out_totals[i]))
    return FlowSummary(rows)
