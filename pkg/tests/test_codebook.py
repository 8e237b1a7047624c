"""Codebook foundation: metric, full search, delta0, trainer, file format."""

import math

import numpy as np
import pytest

from hqvq import (
    Codebook,
    compute_delta0,
    distance,
    full_search,
    load_codebook,
    save_codebook,
    train_codebook,
)


def brute_nearest(x, vectors):
    """Independent oracle: plain-python linear scan with math.sqrt."""
    best_i, best_d = 0, float("inf")
    for i, c in enumerate(vectors):
        d = math.sqrt(sum((a - b) ** 2 for a, b in zip(x, c)))
        if d < best_d:
            best_i, best_d = i, d
    return best_i, best_d


class TestDistance:
    def test_three_four_five(self):
        assert distance([0, 0], [3, 4]) == 5.0

    def test_identical_is_zero(self):
        assert distance([1, 2, 3], [1, 2, 3]) == 0.0

    def test_one_dimensional(self):
        assert distance([0.0], [10.0]) == 10.0

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a, b = rng.normal(size=4), rng.normal(size=4)
            assert distance(a, b) == distance(b, a)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            distance([0, 0], [1, 2, 3])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            distance([np.nan, 0], [0, 0])

    def test_triangle_inequality_many_triples(self):
        rng = np.random.default_rng(99)
        for _ in range(10_000):
            a, b, c = rng.normal(scale=10, size=(3, 3))
            assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12


class TestFullSearch:
    def test_exact_member(self):
        cb = Codebook([[0.0, 0.0], [1.0, 5.0], [2.0, 2.0]])
        assert full_search([2.0, 2.0], cb) == (2, 0.0)

    def test_symmetric_tie_smallest_index(self):
        cb = Codebook([[0.0], [1.0]])
        assert full_search([0.5], cb) == (0, 0.5)

    def test_matches_independent_brute_force(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            vectors = rng.uniform(-10, 10, size=(16, 2))
            cb = Codebook(vectors)
            x = rng.uniform(-10, 10, size=2)
            i, d = full_search(x, cb)
            bi, bd = brute_nearest(x, vectors)
            assert i == bi
            assert d == pytest.approx(bd, abs=1e-12)

    def test_result_beats_every_codevector(self):
        rng = np.random.default_rng(4)
        vectors = rng.normal(size=(12, 3))
        cb = Codebook(vectors)
        for _ in range(50):
            x = rng.normal(size=3)
            _, d = full_search(x, cb)
            for c in vectors:
                assert d <= distance(x, c) + 1e-15

    def test_dimension_mismatch(self):
        cb = Codebook([[0.0, 0.0], [1.0, 1.0]])
        with pytest.raises(ValueError, match="dimension"):
            full_search([1.0, 2.0, 3.0], cb)


class TestDelta0:
    def test_three_point_example(self):
        # pairs: d01=5, d02=10, d12=5  ->  min 5
        assert compute_delta0([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]]) == 5.0

    def test_single_pair(self):
        assert compute_delta0([[0.0], [10.0]]) == 10.0

    def test_duplicates_rejected_at_construction(self):
        assert compute_delta0([[1.0, 1.0], [1.0, 1.0]]) == 0.0
        with pytest.raises(ValueError, match="duplicate"):
            Codebook([[1.0, 1.0], [1.0, 1.0]])

    def test_fewer_than_two_rejected(self):
        with pytest.raises(ValueError):
            compute_delta0([[1.0, 2.0]])
        with pytest.raises(ValueError, match="at least 2"):
            Codebook([[1.0, 2.0]])

    def test_lower_bounds_all_pairs(self):
        rng = np.random.default_rng(8)
        vectors = rng.normal(size=(20, 2))
        cb = Codebook(vectors)
        for i in range(20):
            for j in range(i + 1, 20):
                assert cb.delta0 <= distance(vectors[i], vectors[j]) + 1e-15

    def test_cached_on_codebook(self):
        cb = Codebook([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]])
        assert cb.delta0 == 5.0


class TestTrainer:
    def test_distinct_points_are_a_fixed_point(self):
        pts = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [10.0, 10.0]])
        cb = train_codebook(pts, 4, seed=1)
        got = sorted(map(tuple, cb.vectors))
        assert got == sorted(map(tuple, pts))

    def test_two_blob_means(self):
        rng = np.random.default_rng(11)
        sigma = 0.5
        blob_a = rng.normal([0.0, 0.0], sigma, size=(200, 2))
        blob_b = rng.normal([20.0, 20.0], sigma, size=(200, 2))
        cb = train_codebook(np.vstack([blob_a, blob_b]), 2, seed=2)
        means = sorted(map(tuple, [blob_a.mean(axis=0), blob_b.mean(axis=0)]))
        got = sorted(map(tuple, cb.vectors))
        for g, m in zip(got, means):
            assert distance(g, m) < 0.1 * sigma

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(3)
        samples = rng.uniform(0, 255, size=(300, 2))
        a = train_codebook(samples, 16, seed=42)
        b = train_codebook(samples, 16, seed=42)
        np.testing.assert_array_equal(a.vectors, b.vectors)

    def test_trained_codebook_is_valid(self):
        rng = np.random.default_rng(13)
        samples = rng.uniform(0, 255, size=(500, 4))
        cb = train_codebook(samples, 32, seed=0)
        assert cb.n == 32 and cb.k == 4
        assert cb.delta0 > 0

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="at least"):
            train_codebook(np.zeros((3, 2)) + np.arange(3)[:, None], 4, seed=0)

    def test_degenerate_identical_samples(self):
        with pytest.raises(ValueError, match="distinct"):
            train_codebook(np.ones((50, 2)), 4, seed=0)


class TestCodebookFile:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(21)
        cb = Codebook(rng.normal(size=(10, 3)) * math.pi)
        path = tmp_path / "cb.txt"
        save_codebook(cb, path)
        back = load_codebook(path)
        np.testing.assert_array_equal(back.vectors, cb.vectors)

    def test_header_format(self, tmp_path):
        cb = Codebook([[0.5, 1.25], [2.0, 3.0]])
        path = tmp_path / "cb.txt"
        save_codebook(cb, path)
        first = path.read_text().splitlines()[0]
        assert first == "VQCB 1 2 2"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("NOPE 1 2 2\n0 0\n1 1\n")
        with pytest.raises(ValueError, match="header"):
            load_codebook(path)

    def test_wrong_row_count_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("VQCB 1 2 3\n0 0\n1 1\n")
        with pytest.raises(ValueError, match="codevector lines"):
            load_codebook(path)
