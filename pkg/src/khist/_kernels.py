"""Compiled inner loops for the allocation and reallocation passes.

State layout shared with ``clustering``:

  X       (n, m)    int32   records as value codes
  counts  (k, m, P) int64   per-cluster frequency tables (P = max p_i)
  sizes   (k,)      int64   member counts
  W       (k, m, P) int64   scoring table derived from counts
  assign  (n,)      int64   cluster of each object

A score is the rational ``sum_j W[c, j, x_j] / den(c)``. All comparisons
cross-multiply integers, so ties are exact.
"""
import numba
import numpy as np

KHIST = 0
KMODES = 1
AVFT = 2


@numba.njit(cache=True)
def _den(c, sizes, algo, dataset_den):
    if algo == KMODES:
        return 1
    if dataset_den > 0:
        return dataset_den
    return sizes[c]


@numba.njit(cache=True)
def refresh(c, counts, sizes, W, pvals, algo, tnum, tden):
    m = counts.shape[1]
    for j in range(m):
        p = pvals[j]
        if algo == KHIST:
            for v in range(p):
                W[c, j, v] = counts[c, j, v]
            continue
        best_v = 0
        best_f = counts[c, j, 0]
        for v in range(1, p):
            if counts[c, j, v] > best_f:
                best_f = counts[c, j, v]
                best_v = v
        if algo == KMODES:
            for v in range(p):
                W[c, j, v] = 0
            W[c, j, best_v] = 1
        else:
            kept = 0
            for v in range(p):
                f = counts[c, j, v]
                if f > 0 and f * tden >= tnum * sizes[c]:
                    W[c, j, v] = f
                    kept += 1
                else:
                    W[c, j, v] = 0
            if kept == 0:
                W[c, j, best_v] = best_f


@numba.njit(cache=True)
def _numerators(x, W, nums):
    k = W.shape[0]
    m = W.shape[1]
    for c in range(k):
        s = 0
        for j in range(m):
            s += W[c, j, x[j]]
        nums[c] = s


@numba.njit(cache=True)
def _argmax(nums, sizes, algo, dataset_den):
    # first index attaining the maximal ratio
    best = 0
    bn = nums[0]
    bd = _den(0, sizes, algo, dataset_den)
    for c in range(1, nums.shape[0]):
        d = _den(c, sizes, algo, dataset_den)
        if nums[c] * bd > bn * d:
            best = c
            bn = nums[c]
            bd = d
    return best


@numba.njit(cache=True)
def _add(c, x, counts, sizes):
    for j in range(x.shape[0]):
        counts[c, j, x[j]] += 1
    sizes[c] += 1


@numba.njit(cache=True)
def _remove(c, x, counts, sizes):
    for j in range(x.shape[0]):
        counts[c, j, x[j]] -= 1
    sizes[c] -= 1


@numba.njit(cache=True)
def allocate(X, is_seed, counts, sizes, W, assign, pvals, algo, tnum, tden, dataset_den):
    """Initial pass: every non-seed object joins its best cluster in file order."""
    k = counts.shape[0]
    nums = np.zeros(k, dtype=np.int64)
    for i in range(X.shape[0]):
        if is_seed[i]:
            continue
        x = X[i]
        _numerators(x, W, nums)
        c = _argmax(nums, sizes, algo, dataset_den)
        assign[i] = c
        _add(c, x, counts, sizes)
        refresh(c, counts, sizes, W, pvals, algo, tnum, tden)


@numba.njit(cache=True)
def sweep(X, counts, sizes, W, assign, pvals, algo, tnum, tden, dataset_den, moves):
    """One reallocation cycle over all objects.

    ``moves`` is an (n, 7) int64 buffer receiving, per reallocation:
    object, source, destination, source score num/den, destination score
    num/den. Returns (swap count, veto count).
    """
    k = counts.shape[0]
    nums = np.zeros(k, dtype=np.int64)
    nmoves = 0
    vetoes = 0
    for i in range(X.shape[0]):
        x = X[i]
        cur = assign[i]
        _numerators(x, W, nums)
        best = _argmax(nums, sizes, algo, dataset_den)
        if best == cur:
            continue
        dc = _den(cur, sizes, algo, dataset_den)
        db = _den(best, sizes, algo, dataset_den)
        if not nums[best] * dc > nums[cur] * db:
            continue  # current cluster ties the best one
        if sizes[cur] == 1:
            vetoes += 1
            continue
        moves[nmoves, 0] = i
        moves[nmoves, 1] = cur
        moves[nmoves, 2] = best
        moves[nmoves, 3] = nums[cur]
        moves[nmoves, 4] = dc
        moves[nmoves, 5] = nums[best]
        moves[nmoves, 6] = db
        nmoves += 1
        _remove(cur, x, counts, sizes)
        _add(best, x, counts, sizes)
        assign[i] = best
        refresh(cur, counts, sizes, W, pvals, algo, tnum, tden)
        refresh(best, counts, sizes, W, pvals, algo, tnum, tden)
    return nmoves, vetoes
