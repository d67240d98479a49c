"""Assignment and IoU kernel tests against brute-force oracles.

Every available backend (pure Python, compiled) is run through the same
checks; a final test asserts they agree bitwise.
"""

import itertools

import numpy as np
import pytest

from smotkit import _kernels


def brute_force_assignment(cost, forbid=None):
    """Enumerate every matching: max cardinality, then min cost, then
    lexicographically smallest row-ordered pair list."""
    cost = np.asarray(cost, dtype=np.float64)
    m, n = cost.shape
    if forbid is None:
        forbid = np.zeros((m, n), dtype=bool)
    allowed = np.isfinite(cost) & ~np.asarray(forbid, dtype=bool)
    best = [None]

    def rec(i, used, pairs, total):
        if i == m:
            key = (-len(pairs), total, pairs)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        rec(i + 1, used, pairs, total)
        for j in range(n):
            if allowed[i, j] and j not in used:
                rec(i + 1, used | {j}, pairs + ((i, j),), total + cost[i, j])

    rec(0, frozenset(), (), 0.0)
    card, total, pairs = best[0]
    return -card, total, pairs


def pairs_of(result):
    rows, cols = result
    return tuple((int(r), int(c)) for r, c in zip(rows, cols))


def total_cost(cost, result):
    rows, cols = result
    return sum(cost[r, c] for r, c in zip(rows, cols))


@pytest.fixture(params=sorted(_kernels.available_backends()))
def kernel(request):
    return _kernels.available_backends()[request.param]


class TestIouMatrix:
    def test_identical_boxes(self, kernel):
        a = np.array([[0.0, 0.0, 10.0, 10.0]])
        assert kernel.iou_matrix(a, a)[0, 0] == 1.0

    def test_disjoint(self, kernel):
        a = np.array([[0.0, 0.0, 10.0, 10.0]])
        b = np.array([[20.0, 20.0, 5.0, 5.0]])
        assert kernel.iou_matrix(a, b)[0, 0] == 0.0

    def test_half_shift(self, kernel):
        a = np.array([[0.0, 0.0, 10.0, 10.0]])
        b = np.array([[5.0, 0.0, 10.0, 10.0]])
        assert kernel.iou_matrix(a, b)[0, 0] == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_matches_scalar_formula(self, kernel):
        rng = np.random.default_rng(7)
        a = np.column_stack(
            [rng.uniform(0, 50, 12), rng.uniform(0, 50, 12), rng.uniform(1, 30, 12), rng.uniform(1, 30, 12)]
        )
        b = np.column_stack(
            [rng.uniform(0, 50, 9), rng.uniform(0, 50, 9), rng.uniform(1, 30, 9), rng.uniform(1, 30, 9)]
        )
        got = kernel.iou_matrix(a, b)
        for i in range(12):
            for j in range(9):
                ax2, ay2 = a[i, 0] + a[i, 2], a[i, 1] + a[i, 3]
                bx2, by2 = b[j, 0] + b[j, 2], b[j, 1] + b[j, 3]
                iw = min(ax2, bx2) - max(a[i, 0], b[j, 0])
                ih = min(ay2, by2) - max(a[i, 1], b[j, 1])
                inter = iw * ih if iw > 0 and ih > 0 else 0.0
                union = (ax2 - a[i, 0]) * (ay2 - a[i, 1]) + (bx2 - b[j, 0]) * (by2 - b[j, 1]) - inter
                assert got[i, j] == pytest.approx(inter / union, abs=1e-14)

    def test_empty_inputs(self, kernel):
        a = np.zeros((0, 4))
        b = np.array([[0.0, 0.0, 1.0, 1.0]])
        assert kernel.iou_matrix(a, b).shape == (0, 1)


class TestSolveAssignment:
    def test_two_by_two(self, kernel):
        cost = np.array([[1.0, 2.0], [2.0, 1.0]])
        assert pairs_of(kernel.solve_assignment(cost)) == ((0, 0), (1, 1))

    def test_single_cell(self, kernel):
        assert pairs_of(kernel.solve_assignment(np.array([[4.0]]))) == ((0, 0),)

    def test_empty_matrix(self, kernel):
        rows, cols = kernel.solve_assignment(np.zeros((0, 3)))
        assert rows.size == 0 and cols.size == 0

    def test_all_forbidden(self, kernel):
        cost = np.ones((2, 2))
        forbid = np.ones((2, 2), dtype=bool)
        rows, cols = kernel.solve_assignment(cost, forbid)
        assert rows.size == 0

    def test_random_square_matches_brute_force(self, kernel):
        rng = np.random.default_rng(123)
        for _ in range(200):
            cost = rng.uniform(0, 10, size=(5, 5))
            got = kernel.solve_assignment(cost)
            _, want_total, want_pairs = brute_force_assignment(cost)
            assert total_cost(cost, got) == want_total
            assert pairs_of(got) == want_pairs

    def test_rectangular_and_forbidden_matches_brute_force(self, kernel):
        rng = np.random.default_rng(42)
        for _ in range(150):
            m = int(rng.integers(1, 5))
            n = int(rng.integers(1, 5))
            cost = rng.uniform(-5, 5, size=(m, n))
            forbid = rng.random((m, n)) < 0.35
            got = kernel.solve_assignment(cost, forbid)
            want_card, want_total, want_pairs = brute_force_assignment(cost, forbid)
            assert len(pairs_of(got)) == want_card
            assert total_cost(cost, got) == want_total
            assert pairs_of(got) == want_pairs

    def test_tie_break_is_lexicographic(self, kernel):
        # All-equal costs admit every permutation; the diagonal is the
        # lexicographically smallest pair list.
        cost = np.zeros((3, 3))
        assert pairs_of(kernel.solve_assignment(cost)) == ((0, 0), (1, 1), (2, 2))

    def test_tie_break_on_integer_grids(self, kernel):
        rng = np.random.default_rng(99)
        for _ in range(200):
            m = int(rng.integers(1, 5))
            n = int(rng.integers(1, 5))
            cost = rng.integers(0, 3, size=(m, n)).astype(np.float64)
            forbid = rng.random((m, n)) < 0.2
            got = kernel.solve_assignment(cost, forbid)
            _, want_total, want_pairs = brute_force_assignment(cost, forbid)
            assert total_cost(cost, got) == want_total
            assert pairs_of(got) == want_pairs

    def test_matching_is_injective(self, kernel):
        rng = np.random.default_rng(5)
        cost = rng.uniform(0, 1, size=(8, 6))
        rows, cols = kernel.solve_assignment(cost)
        assert len(set(rows.tolist())) == rows.size
        assert len(set(cols.tolist())) == cols.size


def test_backends_agree_bitwise():
    backends = _kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("only one kernel backend available")
    rng = np.random.default_rng(2024)
    for _ in range(100):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 7))
        cost = rng.uniform(-3, 3, size=(m, n))
        forbid = rng.random((m, n)) < 0.25
        results = [b.solve_assignment(cost, forbid) for b in backends.values()]
        first = pairs_of(results[0])
        assert all(pairs_of(r) == first for r in results[1:])
        boxes_a = np.column_stack(
            [rng.uniform(0, 40, m), rng.uniform(0, 40, m), rng.uniform(1, 20, m), rng.uniform(1, 20, m)]
        )
        boxes_b = np.column_stack(
            [rng.uniform(0, 40, n), rng.uniform(0, 40, n), rng.uniform(1, 20, n), rng.uniform(1, 20, n)]
        )
        ious = [b.iou_matrix(boxes_a, boxes_b) for b in backends.values()]
        for other in ious[1:]:
            assert np.array_equal(ious[0], other)
