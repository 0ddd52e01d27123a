"""Ranking and classification metrics for the positive class."""
from fractions import Fraction

import numpy as np


def average_precision(ranking, truth):
    """Average of precision@r over the ranks r of the positive items.

    Parameters
    ----------
    ranking : RankResult or array of indices
        Item indices in ranked order (best first).
    truth : (n,) bool array, indexed by item
    """
    order = np.asarray(getattr(ranking, "order", ranking), dtype=int)
    truth = np.asarray(truth, dtype=bool)
    hits = truth[order]
    n_pos = int(hits.sum())
    if n_pos == 0:
        raise ValueError("average precision is undefined without positive items")
    ranks = np.flatnonzero(hits) + 1
    # rational accumulation: the result is the correctly rounded exact AP
    total = sum(Fraction(k, int(r)) for k, r in enumerate(ranks, 1))
    return float(total / n_pos)


def average_precision_from_distances(distances, truth):
    """AP when items are ranked by ascending distance (ties keep input order)."""
    return average_precision(np.argsort(np.asarray(distances), kind="stable"), truth)


def f1_score(predicted, truth):
    """Harmonic mean of precision and recall; 0 when both are 0."""
    predicted = np.asarray(predicted, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    tp = int(np.sum(predicted & truth))
    fp = int(np.sum(predicted & ~truth))
    fn = int(np.sum(~predicted & truth))
    if tp == 0:
        return 0.0
    # 2PR/(P+R) written in counts; identical value, no intermediate rounding
    return 2 * tp / (2 * tp + fp + fn)
