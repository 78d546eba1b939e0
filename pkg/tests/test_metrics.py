import numpy as np
import pytest

from funcward import ari, repeat_labels, sim

from oracles import ari_by_pair_counts, sim_by_sets


class TestAri:
    def test_identical_partitions(self):
        assert ari([1, 1, 2, 2, 3], [1, 1, 2, 2, 3]) == 1.0

    def test_crossed_partition_exact(self):
        assert ari([1, 1, 2, 2], [1, 2, 1, 2]) == -0.5

    def test_relabeling_invariance(self):
        a = [1, 1, 2, 2, 3, 3]
        b = [7, 7, 5, 5, 9, 9]
        assert ari(a, b) == 1.0

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(2, 25))
            a = rng.integers(0, 4, n)
            b = rng.integers(0, 4, n)
            assert ari(a, b) == ari(b, a)

    def test_matches_pair_count_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(2, 31))
            a = rng.integers(0, 5, n)
            b = rng.integers(0, 5, n)
            assert ari(a, b) == pytest.approx(ari_by_pair_counts(a, b), abs=1e-12)

    def test_at_most_one(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            assert ari(rng.integers(0, 3, n), rng.integers(0, 3, n)) <= 1.0

    def test_degenerate_single_cluster_both(self):
        assert ari([1, 1, 1], [2, 2, 2]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ari([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(ValueError):
            ari([1], [1])


class TestSim:
    def test_identical_partitions(self):
        assert sim([1, 1, 2, 2], [1, 1, 2, 2]) == 1.0

    def test_perfect_recovery_after_relabeling(self):
        assert sim([1, 1, 2, 2, 3], [3, 3, 1, 1, 2]) == 1.0

    def test_worked_example(self):
        assert sim([1, 1, 2, 2], [1, 1, 1, 2]) == pytest.approx(11 / 15)

    def test_matches_set_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 30))
            g = rng.integers(0, 4, n)
            a = rng.integers(0, 4, n)
            assert sim(g, a) == pytest.approx(sim_by_sets(g, a), abs=1e-12)

    def test_not_symmetric(self):
        g = [1, 1, 1, 2]
        a = [1, 1, 2, 3]
        assert sim(g, a) != sim(a, g)

    def test_range(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(2, 25))
            val = sim(rng.integers(0, 4, n), rng.integers(0, 4, n))
            assert 0.0 <= val <= 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            sim([1, 2, 3], [1, 2])


class TestRepeatLabels:
    def test_expands_per_unit(self):
        out = repeat_labels([1, 2], [3, 2])
        assert list(out) == [1, 1, 1, 2, 2]
