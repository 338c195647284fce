"""Retrieval and classification scoring over distance matrices."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from fastcd.image_pipeline import texture_bits

DEFAULT_THRESHOLDS = tuple(round(0.05 * k, 2) for k in range(1, 20))


@dataclass(frozen=True)
class PrPoint:
    cutoff: int
    precision: float
    recall: float


def pr_curve(ranking: Sequence, relevant: Iterable) -> list[PrPoint]:
    """Precision and recall after each rank cutoff 1..N."""
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set is empty")
    missing = relevant.difference(ranking)
    if missing:
        raise ValueError(f"relevant items not in ranking: {sorted(map(str, missing))[:5]}")
    hits = np.cumsum([item in relevant for item in ranking])
    cutoffs = np.arange(1, len(ranking) + 1)
    return [
        PrPoint(int(c), float(h / c), float(h / len(relevant)))
        for c, h in zip(cutoffs, hits)
    ]


def anr(ranks: Sequence[int], n: int) -> float:
    """Average normalized rank of 1-based ``ranks`` among ``n`` items.

    0 when every relevant item is ranked first; about 0.5 for random order
    when relevant items are few.
    """
    ranks = [int(r) for r in ranks]
    nr = len(ranks)
    if nr == 0:
        raise ValueError("anr needs at least one relevant item")
    if nr > n or len(set(ranks)) != nr or min(ranks) < 1 or max(ranks) > n:
        raise ValueError("ranks must be distinct and lie in [1, n]")
    return (sum(ranks) - nr * (nr + 1) / 2) / (n * nr)


def _ranking(values: np.ndarray, q: int, exclude_self: bool) -> np.ndarray:
    order = np.argsort(values[q], kind="stable")
    if exclude_self:
        order = order[order != q]
    return order


def _labels_for(ids: Sequence[str], labels) -> list[str]:
    if isinstance(labels, Mapping):
        return [labels[i] for i in ids]
    labels = list(labels)
    if len(labels) != len(ids):
        raise ValueError("one label per matrix item required")
    return labels


def query_anr(matrix, labels) -> np.ndarray:
    """Per-query ANR with the query removed from its own ranking.

    Queries whose class has no other member get NaN.
    """
    lab = np.asarray(_labels_for(matrix.ids, labels))
    n = len(lab)
    out = np.full(n, np.nan)
    for q in range(n):
        order = _ranking(matrix.values, q, exclude_self=True)
        rel = np.flatnonzero(lab[order] == lab[q]) + 1
        if rel.size:
            out[q] = anr(rel, n - 1)
    return out


def mean_anr(matrix, labels) -> float:
    return float(np.nanmean(query_anr(matrix, labels)))


def mean_pr_curve(matrix, labels) -> list[PrPoint]:
    """Precision/recall per cutoff, averaged over every query (self excluded)."""
    lab = np.asarray(_labels_for(matrix.ids, labels))
    n = len(lab)
    prec = np.zeros(n - 1)
    rec = np.zeros(n - 1)
    used = 0
    for q in range(n):
        order = _ranking(matrix.values, q, exclude_self=True)
        hit = lab[order] == lab[q]
        if not hit.any():
            continue
        h = np.cumsum(hit)
        prec += h / np.arange(1, n)
        rec += h / hit.sum()
        used += 1
    if used == 0:
        raise ValueError("no query has a relevant item")
    return [PrPoint(c + 1, float(p / used), float(r / used)) for c, (p, r) in enumerate(zip(prec, rec))]


def ns_scores(matrix, groups) -> np.ndarray:
    """Per-query count of group members among the 4 nearest items.

    The query itself is part of the candidate list. Equal distances keep
    matrix order, which makes degenerate inputs tie-order dependent.
    """
    grp = _labels_for(matrix.ids, groups)
    sizes = Counter(grp)
    bad = {g: c for g, c in sizes.items() if c != 4}
    if bad:
        raise ValueError(f"every group needs exactly 4 members; got {dict(list(bad.items())[:5])}")
    grp = np.asarray(grp)
    out = np.zeros(len(grp))
    for q in range(len(grp)):
        top = _ranking(matrix.values, q, exclude_self=False)[:4]
        out[q] = np.count_nonzero(grp[top] == grp[q])
    return out


def ns_score(matrix, groups) -> float:
    return float(ns_scores(matrix, groups).mean())


def classify_min_avg_distance(matrix, labels, query_id: str) -> str:
    """Label whose members are closest to ``query_id`` on average (leave-one-out).

    Ties go to the label that sorts first.
    """
    lab = np.asarray(_labels_for(matrix.ids, labels))
    q = matrix.index(query_id)
    row = matrix.values[q]
    keep = np.ones(len(lab), bool)
    keep[q] = False
    best, best_label = math.inf, None
    for c in sorted(set(lab.tolist())):
        members = keep & (lab == c)
        if not members.any():
            raise ValueError(f"class {c!r} has no members besides the query")
        avg = row[members].mean()
        if avg < best:
            best, best_label = avg, c
    return best_label


@dataclass
class ConfusionMatrix:
    classes: list[str]
    counts: np.ndarray

    @property
    def per_class_accuracy(self) -> np.ndarray:
        totals = self.counts.sum(axis=1)
        return np.divide(np.diag(self.counts), totals, out=np.zeros(len(totals)), where=totals > 0)

    @property
    def accuracy(self) -> float:
        return float(self.per_class_accuracy.mean())

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["true\\predicted", *self.classes, "accuracy"])
            for c, row, acc in zip(self.classes, self.counts, self.per_class_accuracy):
                w.writerow([c, *row.tolist(), f"{acc:.6f}"])
            w.writerow(["average", *([""] * len(self.classes)), f"{self.accuracy:.6f}"])


def confusion_matrix(matrix, labels) -> ConfusionMatrix:
    """Leave-one-out minimum-average-distance classification of every item."""
    lab = _labels_for(matrix.ids, labels)
    classes = sorted(set(lab))
    pos = {c: k for k, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for item, true in zip(matrix.ids, lab):
        pred = classify_min_avg_distance(matrix, lab, item)
        counts[pos[true], pos[pred]] += 1
    return ConfusionMatrix(classes, counts)


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) source; symmetric in p and 1 - p exactly."""
    q = min(p, 1.0 - p)
    if q <= 0.0:
        return 0.0
    return -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))


def texture_ones_fraction(sample: Sequence, t: float) -> float:
    ones = total = 0
    for hsv in sample:
        bits = texture_bits(hsv, t)
        ones += int(bits.sum())
        total += bits.size
    if total == 0:
        raise ValueError("empty calibration sample")
    return ones / total


def threshold_entropies(sample: Sequence, candidates: Iterable[float] = DEFAULT_THRESHOLDS):
    """``[(t, ones_fraction, entropy_bits), ...]`` for each candidate threshold."""
    return [
        (float(t), p, binary_entropy(p))
        for t in candidates
        for p in (texture_ones_fraction(sample, t),)
    ]


def calibrate_threshold(sample: Sequence, candidates: Iterable[float] = DEFAULT_THRESHOLDS) -> float:
    """Threshold maximizing the entropy of the pooled texture bits of HSV images.

    Ties go to the smaller threshold.
    """
    candidates = sorted(float(t) for t in candidates)
    if not candidates:
        raise ValueError("no candidate thresholds")
    if not sample:
        raise ValueError("empty calibration sample")
    table = threshold_entropies(sample, candidates)
    best = max(table, key=lambda row: (row[2], -row[0]))
    return best[0]
