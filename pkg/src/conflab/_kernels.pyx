# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for ROC/AUC counting and step-curve integration.

Signatures and results match ``_pykernels`` exactly; see ``kernels``.
"""

import numpy as np


def auc_pair_twice(const double[::1] pos, const double[::1] neg):
    """Twice the Mann-Whitney count: 2 per correctly ordered pair, 1 per tie.

    Both sides are sorted, then one merge pass counts, for each positive,
    the negatives strictly below it and those tied with it.
    """
    cdef double[::1] ps = np.sort(np.asarray(pos))
    cdef double[::1] ns = np.sort(np.asarray(neg))
    cdef Py_ssize_t i, below = 0, upto = 0, n_pos = ps.shape[0], n_neg = ns.shape[0]
    cdef long long total = 0
    cdef double p
    for i in range(n_pos):
        p = ps[i]
        while below < n_neg and ns[below] < p:
            below += 1
        if upto < below:
            upto = below
        while upto < n_neg and ns[upto] == p:
            upto += 1
        total += below + upto
    return total


def roc_counts(const double[::1] markers, const signed char[::1] labels):
    """Cumulative (tp, fp) after each group of equal markers.

    ``markers`` must be sorted in descending order.  Entry 0 is (0, 0), the
    +inf cut-off; entry k counts every sample in the first k groups.
    Returns ``(values, tp, fp)`` where ``values[k]`` is the k-th distinct marker.
    """
    cdef Py_ssize_t n = markers.shape[0], i = 0, g = 0
    cdef long long tp = 0
    cdef double v
    values_arr = np.empty(n, dtype=np.float64)
    tps_arr = np.zeros(n + 1, dtype=np.int64)
    fps_arr = np.zeros(n + 1, dtype=np.int64)
    cdef double[::1] values = values_arr
    cdef long long[::1] tps = tps_arr
    cdef long long[::1] fps = fps_arr
    while i < n:
        v = markers[i]
        # branch-free: labels are random, so an if/else mispredicts half the time
        while i < n and markers[i] == v:
            tp += labels[i] != 0
            i += 1
        values[g] = v
        g += 1
        tps[g] = tp
        fps[g] = i - tp
    return values_arr[:g].tolist(), tps_arr[:g + 1].tolist(), fps_arr[:g + 1].tolist()


def step_overlap(const double[::1] ref_edges, const double[::1] ref_p,
                 const double[::1] imp_edges, const double[::1] imp_p):
    """Integrate min, positive excess and shortfall of two step functions.

    Both curves share their outer edges.  Returns ``(common, excess, shortfall)``
    where excess is where ``imp`` exceeds ``ref``.
    """
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t nr = ref_p.shape[0], ni = imp_p.shape[0]
    cdef double x0 = ref_edges[0], x1, w, r, m
    cdef double common = 0.0, excess = 0.0, shortfall = 0.0
    while i < nr and j < ni:
        x1 = ref_edges[i + 1] if ref_edges[i + 1] < imp_edges[j + 1] else imp_edges[j + 1]
        w = x1 - x0
        r = ref_p[i]
        m = imp_p[j]
        if m < r:
            common += w * m
            shortfall += w * (r - m)
        else:
            common += w * r
            excess += w * (m - r)
        x0 = x1
        if ref_edges[i + 1] == x1:
            i += 1
        if imp_edges[j + 1] == x1:
            j += 1
    return common, excess, shortfall
