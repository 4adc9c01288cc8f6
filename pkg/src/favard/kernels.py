"""Hot loops, each in a numba flavour (``*_nb``) and a numpy flavour (``*_np``).

The public names (``merge_sorted``, ``replicate_union``, ``leaf_counts``,
``crowding_sums``) dispatch on :data:`favard._accel.USE_NUMBA`.  Both flavours
must agree exactly on integer outputs and to rounding on float outputs; the
test-suite checks this and ``benchmarks/bench_backends.py`` times them.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# sweep-line union of intervals already sorted by left endpoint


@njit
def merge_sorted_nb(lefts, rights, eps):
    n = lefts.shape[0]
    out_l = np.empty(n)
    out_r = np.empty(n)
    if n == 0:
        return out_l, out_r
    k = 0
    cur_l = lefts[0]
    cur_r = rights[0]
    for i in range(1, n):
        if lefts[i] > cur_r + eps:
            out_l[k] = cur_l
            out_r[k] = cur_r
            k += 1
            cur_l = lefts[i]
            cur_r = rights[i]
        elif rights[i] > cur_r:
            cur_r = rights[i]
    out_l[k] = cur_l
    out_r[k] = cur_r
    k += 1
    return out_l[:k].copy(), out_r[:k].copy()


def merge_sorted_np(lefts, rights, eps):
    n = lefts.shape[0]
    if n == 0:
        return lefts.copy(), rights.copy()
    reach = np.maximum.accumulate(rights)
    start = np.empty(n, dtype=bool)
    start[0] = True
    start[1:] = lefts[1:] > reach[:-1] + eps
    first = np.flatnonzero(start)
    last = np.append(first[1:] - 1, n - 1)
    return lefts[first], reach[last]


# ---------------------------------------------------------------------------
# union of scaled, shifted copies of a disjoint sorted set:
#     U' = union_c (offsets[c] + scale * U)
# offsets must be sorted ascending.


@njit
def replicate_union_nb(lefts, rights, offsets, scale, eps):
    m = lefts.shape[0]
    k = offsets.shape[0]
    total = m * k
    out_l = np.empty(total)
    out_r = np.empty(total)
    if total == 0:
        return out_l, out_r
    ptr = np.zeros(k, dtype=np.int64)
    cnt = 0
    cur_l = 0.0
    cur_r = 0.0
    for step in range(total):
        best = -1
        best_val = np.inf
        for c in range(k):
            p = ptr[c]
            if p < m:
                v = offsets[c] + scale * lefts[p]
                if v < best_val:
                    best_val = v
                    best = c
        p = ptr[best]
        ptr[best] = p + 1
        right = offsets[best] + scale * rights[p]
        if step == 0:
            cur_l = best_val
            cur_r = right
        elif best_val > cur_r + eps:
            out_l[cnt] = cur_l
            out_r[cnt] = cur_r
            cnt += 1
            cur_l = best_val
            cur_r = right
        elif right > cur_r:
            cur_r = right
    out_l[cnt] = cur_l
    out_r[cnt] = cur_r
    cnt += 1
    return out_l[:cnt].copy(), out_r[:cnt].copy()


def replicate_union_np(lefts, rights, offsets, scale, eps):
    if lefts.shape[0] == 0 or offsets.shape[0] == 0:
        return np.empty(0), np.empty(0)
    ls = (offsets[:, None] + scale * lefts[None, :]).ravel()
    rs = (offsets[:, None] + scale * rights[None, :]).ravel()
    # each row is already sorted, so the stable sort only merges k runs
    order = np.argsort(ls, kind="stable")
    return merge_sorted_np(ls[order], rs[order], eps)


# ---------------------------------------------------------------------------
# tree descent: how many depth-n leaves of the self-similar square tree have a
# projection containing xs[i].  A node at depth d has side sides[d]; its
# children sit at  center + offsets[i, j] * sides[d]  with half-width
# half0[i] * sides[d + 1].  first_only stops at the first leaf (hit/miss).


@njit
def leaf_counts_nb(xs, centers0, offsets, half0, sides, n, first_only):
    S = xs.shape[0]
    k = offsets.shape[1]
    out = np.zeros(S, dtype=np.int64)
    cap = (k - 1) * n + 2
    stack_c = np.empty(cap)
    stack_d = np.empty(cap, dtype=np.int64)
    for i in range(S):
        x = xs[i]
        if abs(x - centers0[i]) > half0[i]:
            continue
        if n == 0:
            out[i] = 1
            continue
        total = 0
        top = 0
        stack_c[0] = centers0[i]
        stack_d[0] = 0
        while top >= 0:
            c = stack_c[top]
            d = stack_d[top]
            top -= 1
            side = sides[d]
            child_half = half0[i] * sides[d + 1]
            for j in range(k):
                cc = c + offsets[i, j] * side
                if abs(x - cc) <= child_half:
                    if d + 1 == n:
                        total += 1
                    else:
                        top += 1
                        stack_c[top] = cc
                        stack_d[top] = d + 1
            if first_only and total > 0:
                break
        if first_only and total > 0:
            total = 1
        out[i] = total
    return out


def leaf_counts_np(xs, centers0, offsets, half0, sides, n, first_only, chunk=4096):
    S = xs.shape[0]
    out = np.zeros(S, dtype=np.int64)
    for start in range(0, S, chunk):
        stop = min(start + chunk, S)
        idx = np.arange(start, stop)
        c = centers0[idx]
        keep = np.abs(xs[idx] - c) <= half0[idx]
        idx, c = idx[keep], c[keep]
        for d in range(n):
            if idx.size == 0:
                break
            cc = c[:, None] + offsets[idx] * sides[d]
            ok = np.abs(xs[idx][:, None] - cc) <= (half0[idx] * sides[d + 1])[:, None]
            rows, cols = np.nonzero(ok)
            idx = idx[rows]
            c = cc[rows, cols]
        out[start:stop] = np.bincount(idx - start, minlength=stop - start)
    if first_only:
        out = (out > 0).astype(np.int64)
    return out


# ---------------------------------------------------------------------------
# Poisson-kernel crowding:  out[k] = sum_j L / (L^2 + (lam_j - lam_k)^2)


@njit
def crowding_sums_nb(lams, L):
    M = lams.shape[0]
    out = np.zeros(M)
    L2 = L * L
    for k in range(M):
        acc = 0.0
        lk = lams[k]
        for j in range(M):
            d = lams[j] - lk
            acc += L / (L2 + d * d)
        out[k] = acc
    return out


def crowding_sums_np(lams, L, chunk=1024):
    M = lams.shape[0]
    out = np.zeros(M)
    for start in range(0, M, chunk):
        d = lams[None, :] - lams[start:start + chunk, None]
        out[start:start + chunk] = (L / (L * L + d * d)).sum(axis=1)
    return out


if USE_NUMBA:
    merge_sorted = merge_sorted_nb
    replicate_union = replicate_union_nb
    leaf_counts = leaf_counts_nb
    crowding_sums = crowding_sums_nb
else:
    merge_sorted = merge_sorted_np
    replicate_union = replicate_union_np
    leaf_counts = leaf_counts_np
    crowding_sums = crowding_sums_np
