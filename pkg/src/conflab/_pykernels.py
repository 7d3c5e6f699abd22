"""Pure-Python/numpy twins of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def auc_pair_twice(pos, neg):
    pos = np.asarray(pos, dtype=np.float64)
    neg = np.asarray(neg, dtype=np.float64)
    neg_sorted = np.sort(neg)
    below = np.searchsorted(neg_sorted, pos, side="left")
    below_or_tied = np.searchsorted(neg_sorted, pos, side="right")
    return int(below.sum() + below_or_tied.sum())


def roc_counts(markers, labels):
    markers = np.asarray(markers, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    if markers.size == 0:
        return [], [0], [0]
    # group boundaries of the descending sort
    last = np.flatnonzero(np.append(markers[1:] != markers[:-1], True))
    tp = np.cumsum(labels)[last]
    fp = (last + 1) - tp
    values = markers[last].tolist()
    return values, [0] + tp.tolist(), [0] + fp.tolist()


def step_overlap(ref_edges, ref_p, imp_edges, imp_p):
    ref_edges = np.asarray(ref_edges, dtype=np.float64)
    imp_edges = np.asarray(imp_edges, dtype=np.float64)
    edges = np.union1d(ref_edges, imp_edges)
    mids = (edges[:-1] + edges[1:]) / 2
    w = np.diff(edges)
    r = np.asarray(ref_p, dtype=np.float64)[np.searchsorted(ref_edges, mids, side="right") - 1]
    m = np.asarray(imp_p, dtype=np.float64)[np.searchsorted(imp_edges, mids, side="right") - 1]
    common = float(np.sum(w * np.minimum(r, m)))
    excess = float(np.sum(w * np.maximum(m - r, 0.0)))
    shortfall = float(np.sum(w * np.maximum(r - m, 0.0)))
    return common, excess, shortfall
