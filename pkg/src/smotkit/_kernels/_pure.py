"""Pure-Python assignment and box-overlap kernels.

This module is the fallback backend; ``_ext.pyx`` implements the same two
operations in Cython. Both follow the identical algorithm step for step so
that they return bitwise-equal results:

* ``iou_matrix`` — pairwise intersection-over-union of two box sets.
* ``solve_assignment`` — maximum-cardinality, minimum-cost bipartite
  matching with a forbidden-pair mask and a deterministic tie-break
  (lexicographically smallest pair list among the optima).

The assignment solver pads the rectangular problem into a square one with
"bench" slots so that leaving a row or column unmatched is an explicit
edge, solves it with the Jonker-Volgenant shortest-augmenting-path method,
and then canonicalises the optimum by sweeping rows in order and rotating
the matching along zero-reduced-cost alternating cycles.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

_INF = np.inf


def iou_matrix(boxes_a: np.ndarray, boxes_b: np.ndarray) -> np.ndarray:
    """Pairwise IoU of ``(m, 4)`` and ``(n, 4)`` arrays of (x, y, w, h) boxes.

    Areas come from corner differences so identical boxes score exactly 1.
    """
    a = np.ascontiguousarray(boxes_a, dtype=np.float64).reshape(-1, 4)
    b = np.ascontiguousarray(boxes_b, dtype=np.float64).reshape(-1, 4)
    ax2 = a[:, 0] + a[:, 2]
    ay2 = a[:, 1] + a[:, 3]
    bx2 = b[:, 0] + b[:, 2]
    by2 = b[:, 1] + b[:, 3]
    iw = np.minimum(ax2[:, None], bx2[None, :]) - np.maximum(a[:, 0][:, None], b[:, 0][None, :])
    ih = np.minimum(ay2[:, None], by2[None, :]) - np.maximum(a[:, 1][:, None], b[:, 1][None, :])
    inter = np.where((iw > 0.0) & (ih > 0.0), iw * ih, 0.0)
    area_a = (ax2 - a[:, 0]) * (ay2 - a[:, 1])
    area_b = (bx2 - b[:, 0]) * (by2 - b[:, 1])
    union = area_a[:, None] + area_b[None, :] - inter
    safe = np.where(union > 0.0, union, 1.0)
    return np.where(union > 0.0, inter / safe, 0.0)


def solve_assignment(cost: np.ndarray, forbid: np.ndarray | None = None):
    """Solve the gated assignment problem.

    Returns ``(rows, cols)`` int64 arrays describing a maximum-cardinality
    matching over allowed pairs with minimum total cost; among all optima
    the lexicographically smallest (row, col) list is returned, sorted by
    row.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost must be a 2-D matrix")
    m, n = cost.shape
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    if m == 0 or n == 0:
        return empty
    if forbid is None:
        allowed = np.isfinite(cost)
    else:
        forbid = np.asarray(forbid, dtype=bool)
        if forbid.shape != cost.shape:
            raise ValueError("forbid mask shape must match cost shape")
        allowed = np.isfinite(cost) & ~forbid
    if not allowed.any():
        return empty

    # Pad to an (m+n) square: row i may sit out via bench column n+i at
    # price B, column j via bench row m+j; bench-bench pairs are free.
    # B exceeds any achievable cost spread, so cardinality dominates cost.
    big = 1.0 + float(np.abs(cost[allowed]).sum())
    size = m + n
    padded = np.full((size, size), _INF)
    padded[:m, :n] = np.where(allowed, cost, _INF)
    padded[np.arange(m), n + np.arange(m)] = big
    padded[m + np.arange(n), np.arange(n)] = big
    padded[m:, n:] = 0.0

    u, v, row_of, col_of = _jv_square(padded)
    _lexicographic_refine(padded, u, v, row_of, col_of, m, n)

    rows = [r for r in range(m) if col_of[r] < n]
    cols = [col_of[r] for r in rows]
    return (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))


def _jv_square(a: np.ndarray):
    """Jonker-Volgenant solve of a square matrix with +inf for absent edges.

    Returns dual potentials (u, v) and the matching (row_of, col_of).
    Ties in the Dijkstra step break on the lowest column index, so the
    result is deterministic.
    """
    size = a.shape[0]
    u = np.zeros(size)
    v = np.zeros(size)
    row_of = np.full(size, -1, dtype=np.int64)  # column -> matched row
    col_of = np.full(size, -1, dtype=np.int64)  # row -> matched column

    for root in range(size):
        minv = np.full(size, _INF)
        way = np.full(size, -1, dtype=np.int64)  # predecessor column in tree
        used = np.zeros(size, dtype=bool)
        i_cur = root
        j_prev = -1
        while True:
            reduced = a[i_cur] - u[i_cur] - v
            better = ~used & (reduced < minv)
            minv[better] = reduced[better]
            way[better] = j_prev
            reachable = np.where(used, _INF, minv)
            j_next = int(np.argmin(reachable))
            delta = reachable[j_next]
            if not np.isfinite(delta):
                raise RuntimeError("assignment instance is infeasible")
            u[root] += delta
            tree = used.nonzero()[0]
            if tree.size:
                u[row_of[tree]] += delta
                v[tree] -= delta
            minv[~used] -= delta
            used[j_next] = True
            if row_of[j_next] < 0:
                break
            i_cur = int(row_of[j_next])
            j_prev = j_next
        # Augment along the predecessor chain.
        j = j_next
        while j >= 0:
            j_before = int(way[j])
            if j_before < 0:
                row_of[j] = root
                col_of[root] = j
            else:
                i = int(row_of[j_before])
                row_of[j] = i
                col_of[i] = j
            j = j_before
    return u, v, row_of, col_of


def _lexicographic_refine(a, u, v, row_of, col_of, m, n):
    """Canonicalise the optimum in place.

    All minimum-cost perfect matchings of the padded square live inside the
    tight subgraph (reduced cost exactly zero). Rows 0..m-1 are fixed in
    order to their smallest feasible tight column; feasibility of a column
    means it lies on an alternating cycle with the row, i.e. both sit in
    one strongly connected component of the residual digraph.
    """
    size = m + n
    # Tight adjacency per row; matched edges are always included.
    tight = []
    for i in range(size):
        cols = np.nonzero(np.isfinite(a[i]) & (a[i] - u[i] - v == 0.0))[0]
        cols = cols.tolist()
        if col_of[i] >= 0 and col_of[i] not in cols:
            cols.append(int(col_of[i]))
            cols.sort()
        tight.append(cols)

    fixed_col = np.zeros(size, dtype=bool)
    for r in range(m):
        comp = _scc(tight, row_of, col_of, fixed_col, size, r)
        matched = int(col_of[r])
        chosen = matched
        for j in tight[r]:
            if fixed_col[j]:
                continue
            if j == matched or (comp[r] == comp[size + j] and comp[r] >= 0):
                chosen = j
                break
        if chosen != matched:
            _rotate(tight, row_of, col_of, fixed_col, size, r, chosen)
        fixed_col[col_of[r]] = True


def _scc(tight, row_of, col_of, fixed_col, size, first_row):
    """Tarjan SCC over the residual digraph of the unfixed tight subgraph.

    Vertices: row i -> i, column j -> size + j. Unmatched tight edges point
    row -> column, matched edges column -> row. Rows below ``first_row``
    are already fixed. Returns component ids (-1 for skipped vertices).
    """
    total = 2 * size
    comp = [-1] * total
    index = [-1] * total
    low = [0] * total
    on_stack = [False] * total
    stack: list[int] = []
    counter = [0]
    n_comp = [0]

    def skipped(vtx: int) -> bool:
        if vtx < size:
            return vtx < first_row
        return fixed_col[vtx - size]

    def neighbors(vtx: int):
        if vtx < size:
            mj = col_of[vtx]
            for j in tight[vtx]:
                if j != mj and not fixed_col[j]:
                    yield size + j
        else:
            i = row_of[vtx - size]
            if i >= 0 and i >= first_row:
                yield int(i)

    for start in range(total):
        if index[start] != -1 or skipped(start):
            continue
        work = [(start, iter(neighbors(start)))]
        index[start] = low[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            vtx, it = work[-1]
            advanced = False
            for w in it:
                if skipped(w):
                    continue
                if index[w] == -1:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(neighbors(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[vtx] = min(low[vtx], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[vtx])
            if low[vtx] == index[vtx]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp[0]
                    if w == vtx:
                        break
                n_comp[0] += 1
    return comp

def _rotate(tight, row_of, col_of, fixed_col, size, r, c):
    """Re-match ``r`` to tight column ``c`` along an alternating cycle.

    BFS in the residual digraph from ``c`` back to ``r``; every row on the
    found path shifts to the next column of the path, preserving a perfect
    matching on tight edges.
    """
    prev_row = {}  # column -> row whose unmatched edge reached it
    prev_col = {}  # row -> column whose matched edge reached it
    start_row = int(row_of[c])
    prev_col[start_row] = int(c)
    frontier_rows = [start_row]
    found = start_row == r
    while not found:
        next_rows = []
        for i in frontier_rows:
            mj = col_of[i]
            for j in tight[i]:
                if j == mj or fixed_col[j] or j in prev_row:
                    continue
                prev_row[j] = i
                nxt = int(row_of[j])
                if nxt in prev_col:
                    continue
                prev_col[nxt] = int(j)
                if nxt == r:
                    found = True
                    break
                next_rows.append(nxt)
            if found:
                break
        frontier_rows = next_rows
        if not frontier_rows and not found:
            raise RuntimeError("alternating cycle vanished during refinement")
    # Flip the cycle: r takes c; every other row on the path takes the
    # column it reached and abandons the one it was reached through.
    j = int(prev_col[r])
    col_of[r] = c
    row_of[c] = r
    while j != c:
        i = int(prev_row[j])
        j_next = int(prev_col[i])
        col_of[i] = j
        row_of[j] = i
        j = j_next
