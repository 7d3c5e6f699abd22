"""Reference computations used by the tests.

These are written from the definitions with plain loops, exact fractions
and set algebra, sharing no code with the package.
"""

from fractions import Fraction
import math


def auc_by_pairs(pos, neg):
    """Exact Mann-Whitney AUC: correctly ordered pairs, ties worth half."""
    score = Fraction(0)
    for p in pos:
        for n in neg:
            if p > n:
                score += 1
            elif p == n:
                score += Fraction(1, 2)
    return score / (len(pos) * len(neg))


def confusion_by_loop(samples, cutoff):
    tp = fp = tn = fn = 0
    for marker, suitable in samples:
        applied = marker >= cutoff
        if applied and suitable:
            tp += 1
        elif applied:
            fp += 1
        elif suitable:
            fn += 1
        else:
            tn += 1
    return tp, fp, tn, fn


def step_value(segments, x):
    for start, end, p in segments:
        if start <= x < end:
            return p
    raise ValueError(f"{x} outside curve")


def decomposition_by_breakpoints(ref, imp):
    """IF, AF, MF by evaluating both step curves at every merged sub-interval midpoint."""
    cuts = sorted({s for s, _, _ in ref} | {e for _, e, _ in ref}
                  | {s for s, _, _ in imp} | {e for _, e, _ in imp})
    common, excess, short = [], [], []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        r, i = step_value(ref, mid), step_value(imp, mid)
        w = hi - lo
        common.append(w * min(r, i))
        excess.append(w * max(i - r, 0.0))
        short.append(w * max(r - i, 0.0))
    return math.fsum(common), math.fsum(excess), math.fsum(short)


def area(segments):
    return math.fsum((e - s) * p for s, e, p in segments)


def entry_divergence(std_entries, impl_entries):
    """Symmetric difference of the (concept, token) sets, over the standard size."""
    a = set(std_entries.items())
    b = set(impl_entries.items())
    return len(a ^ b) / len(std_entries)


def interop_by_sets(ea, eb, required):
    """Success iff every required concept is present in both and the tokens match."""
    return all(c in ea and c in eb and ea[c] == eb[c] for c in required)


def geometric_mean_ticks(p):
    return 1.0 / p
