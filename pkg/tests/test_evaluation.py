import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastcd.evaluation import (
    DEFAULT_THRESHOLDS,
    anr,
    binary_entropy,
    calibrate_threshold,
    classify_min_avg_distance,
    confusion_matrix,
    mean_anr,
    mean_pr_curve,
    ns_score,
    pr_curve,
    query_anr,
    texture_ones_fraction,
    threshold_entropies,
)
from fastcd.image_pipeline import rgb_to_hsv
from fastcd.store import DistanceMatrix


def matrix(values, ids=None):
    values = np.asarray(values, float)
    ids = ids or [f"i{k}" for k in range(len(values))]
    return DistanceMatrix(ids, values)


# -- precision / recall ------------------------------------------------------

def test_pr_perfect():
    pts = pr_curve(list("abcdefgh"), {"a", "b", "c"})
    assert [p.precision for p in pts[:3]] == [1.0, 1.0, 1.0]
    assert pts[2].recall == 1.0
    assert all(a.recall <= b.recall for a, b in zip(pts, pts[1:]))


def test_pr_three_of_four_in_top_ten():
    ranking = [f"x{k}" for k in range(20)]
    relevant = {"x0", "x4", "x9", "x15"}
    p10 = pr_curve(ranking, relevant)[9]
    assert (p10.cutoff, p10.precision, p10.recall) == (10, 0.3, 0.75)


def test_pr_relevant_last():
    ranking = list(range(10))
    pts = pr_curve(ranking, {8, 9})
    assert pts[-1].recall == 1.0
    assert pts[-1].precision == pytest.approx(2 / 10)
    assert pts[7].recall == 0


def test_pr_errors():
    with pytest.raises(ValueError):
        pr_curve([1, 2], set())
    with pytest.raises(ValueError):
        pr_curve([1, 2], {3})


# -- ANR ---------------------------------------------------------------------

def brute_anr(ranks, n):
    nr = len(ranks)
    return (1 / (n * nr)) * (sum(ranks) - nr * (nr + 1) / 2)


def test_anr_examples():
    assert anr([1, 2, 3], 10) == 0
    assert anr([1, 10], 10) == 0.4


@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n), min_size=1))))
def test_anr_matches_formula(case):
    n, ranks = case
    assert anr(sorted(ranks), n) == pytest.approx(brute_anr(sorted(ranks), n))
    assert 0 <= anr(sorted(ranks), n) <= 1


def test_anr_random_mean():
    rng = np.random.default_rng(0)
    n, nr = 1000, 10
    vals = [anr(rng.choice(n, nr, replace=False) + 1, n) for _ in range(2000)]
    assert np.mean(vals) == pytest.approx((n - nr) / (2 * n), abs=0.01)


def test_anr_errors():
    with pytest.raises(ValueError):
        anr([], 5)
    with pytest.raises(ValueError):
        anr([1, 1], 5)
    with pytest.raises(ValueError):
        anr([6], 5)


def test_anr_unchanged_by_permuting_irrelevant_items():
    rng = np.random.default_rng(1)
    labels = ["a"] * 3 + ["b"] * 5
    vals = rng.random((8, 8))
    base = query_anr(matrix(vals), labels)[0]
    # swap two irrelevant columns' distances for query 0
    v2 = vals.copy()
    v2[0, 4], v2[0, 6] = v2[0, 6], v2[0, 4]
    assert query_anr(matrix(v2), labels)[0] == base


def test_matrix_anr_excludes_self():
    labels = ["a", "a", "b", "b"]
    vals = np.array([[0, .1, .9, .9], [.1, 0, .9, .9], [.9, .9, 0, .1], [.9, .9, .1, 0]])
    assert mean_anr(matrix(vals), labels) == 0


def test_mean_pr_curve_reaches_full_recall():
    rng = np.random.default_rng(2)
    labels = ["a"] * 4 + ["b"] * 4
    pts = mean_pr_curve(matrix(rng.random((8, 8))), labels)
    assert len(pts) == 7
    assert pts[-1].recall == pytest.approx(1.0)


# -- N-S score ---------------------------------------------------------------

def test_ns_duplicate_groups_score_four():
    groups = [g for g in range(5) for _ in range(4)]
    vals = np.array([[0.0 if a == b else 1.0 for b in groups] for a in groups])
    assert ns_score(matrix(vals), [str(g) for g in groups]) == 4.0


def test_ns_all_identical_is_tie_order_dependent():
    groups = [str(g) for g in range(3) for _ in range(4)]
    # stable ordering keeps matrix order, so the first group wins every query
    assert ns_score(matrix(np.zeros((12, 12))), groups) == pytest.approx(4 / 3)


def test_ns_random_matrix():
    rng = np.random.default_rng(3)
    groups = [str(g) for g in range(25) for _ in range(4)]
    scores = [ns_score(matrix(rng.random((100, 100))), groups) for _ in range(60)]
    assert np.mean(scores) == pytest.approx(16 / 100, abs=0.02)


def test_ns_rejects_bad_groups():
    with pytest.raises(ValueError):
        ns_score(matrix(np.zeros((5, 5))), ["a"] * 5)


# -- classification ----------------------------------------------------------

def test_classify_picks_closest_class():
    labels = ["a", "a", "b", "b", "c", "c"]
    vals = np.ones((6, 6))
    vals[0, 2] = vals[0, 3] = 0
    assert classify_min_avg_distance(matrix(vals), labels, "i0") == "b"


def test_classify_tie_goes_to_first_label():
    labels = ["z", "z", "b", "b", "a", "a"]
    vals = np.full((6, 6), 0.5)
    assert classify_min_avg_distance(matrix(vals), labels, "i0") == "a"


def test_classify_leave_one_out():
    labels = ["a", "b", "b"]
    vals = np.array([[0, .5, .5], [.5, 0, .9], [.5, .9, 0]])
    # with the query excluded, class b's own average for i1 is 0.9
    assert classify_min_avg_distance(matrix(vals), labels, "i1") == "a"


def test_classify_needs_other_members():
    with pytest.raises(ValueError):
        classify_min_avg_distance(matrix(np.zeros((2, 2))), ["a", "b"], "i0")


@settings(max_examples=50)
@given(st.floats(0.01, 10), st.floats(-5, 5), st.integers(0, 10_000))
def test_classify_invariant_to_positive_affine(a, b, seed):
    rng = np.random.default_rng(seed)
    labels = ["a", "a", "a", "b", "b", "c", "c", "c"]
    vals = rng.random((8, 8))
    m1, m2 = matrix(vals), matrix(a * vals + b)
    for q in m1.ids:
        assert classify_min_avg_distance(m1, labels, q) == classify_min_avg_distance(m2, labels, q)


def test_confusion_matrix(tmp_path):
    labels = ["a", "a", "b", "b"]
    vals = np.array([[0, .1, .9, .9], [.1, 0, .9, .9], [.9, .9, 0, .1], [.05, .05, .5, 0]])
    cm = confusion_matrix(matrix(vals), labels)
    assert cm.classes == ["a", "b"]
    assert cm.counts.tolist() == [[2, 0], [1, 1]]
    assert cm.counts.sum(axis=1).tolist() == [2, 2]
    assert cm.accuracy == pytest.approx(0.75)
    cm.to_csv(tmp_path / "cm.csv")
    assert (tmp_path / "cm.csv").read_text().splitlines()[-1] == "average,,,0.750000"


# -- calibration -------------------------------------------------------------

def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.2) == binary_entropy(0.8)


def test_threshold_zero_gives_nearly_all_ones():
    rng = np.random.default_rng(4)
    hsv = rgb_to_hsv(rng.integers(0, 256, (32, 32, 3)))
    p = texture_ones_fraction([hsv], 0.0)
    assert p > 0.99
    assert binary_entropy(p) < 0.1


def _step_image(distances, rows=10):
    """HSV image whose column j alternates values ``distances[j]`` apart in value."""
    img = np.zeros((rows, len(distances), 3))
    for j, d in enumerate(distances):
        img[1::2, j, 2] = d
    return img


def test_calibration_finds_half_ones():
    # half the columns jump by 0.6, half by 0.2: t in [0.2, 0.6) gives 50 % ones
    img = _step_image([0.6] * 5 + [0.2] * 5)
    t = calibrate_threshold([img], DEFAULT_THRESHOLDS)
    assert t == 0.2
    assert texture_ones_fraction([img], t) == 0.5


def test_calibration_choice_is_nearest_half():
    rng = np.random.default_rng(5)
    sample = [rgb_to_hsv(rng.integers(0, 256, (16, 16, 3)) // 40 * 40) for _ in range(3)]
    table = threshold_entropies(sample)
    best = calibrate_threshold(sample)
    nearest = min(table, key=lambda r: (abs(r[1] - 0.5), r[0]))
    assert best == nearest[0]


def test_calibration_errors():
    with pytest.raises(ValueError):
        calibrate_threshold([np.zeros((3, 3, 3))], [])
    with pytest.raises(ValueError):
        calibrate_threshold([], [0.4])
