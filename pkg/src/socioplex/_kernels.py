"""Z/2 column reduction of a sparse boundary matrix.

Two interchangeable backends produce bit-identical results:

* ``reduce_numba`` -- compiled merge loops over flat int64 buffers;
* ``reduce_numpy`` -- the same algorithm with one numpy array per column and
  ``np.setxor1d`` for column addition.

Both take the boundary in CSC form (``indptr``, ``indices``; rows of every
column sorted ascending), a processing ``order`` and per-dimension flags
saying for which columns to accumulate the change-of-basis matrix V
(``R = D V``). Reduced columns are stored as (start, length) slices into one
buffer: ``R[j] = r_data[r_start[j]:r_start[j] + r_len[j]]``.
"""
import numpy as np

from ._jit import njit


@njit
def _grow(buf, need):
    if need <= buf.shape[0]:
        return buf
    size = buf.shape[0] * 2
    while size < need:
        size *= 2
    out = np.empty(size, dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit
def _xor_merge(a, la, b, lb, out):
    i = 0
    j = 0
    k = 0
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x < y:
            out[k] = x
            i += 1
            k += 1
        elif y < x:
            out[k] = y
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < la:
        out[k] = a[i]
        i += 1
        k += 1
    while j < lb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@njit
def _reduce_kernel(indptr, indices, order, dims, clearing, track):
    m = indptr.shape[0] - 1
    low = np.full(m, -1, dtype=np.int64)
    pivot_col = np.full(m, -1, dtype=np.int64)
    cleared = np.zeros(m, dtype=np.bool_)
    r_start = np.zeros(m, dtype=np.int64)
    r_len = np.zeros(m, dtype=np.int64)
    v_start = np.zeros(m, dtype=np.int64)
    v_len = np.zeros(m, dtype=np.int64)
    r_data = np.empty(max(16, indices.shape[0]), dtype=np.int64)
    v_data = np.empty(16, dtype=np.int64)
    r_used = 0
    v_used = 0
    work = np.empty(16, dtype=np.int64)
    tmp = np.empty(16, dtype=np.int64)
    vwork = np.empty(16, dtype=np.int64)
    vtmp = np.empty(16, dtype=np.int64)
    additions = 0

    for t in range(order.shape[0]):
        j = order[t]
        if clearing and cleared[j]:
            continue
        a = indptr[j]
        L = indptr[j + 1] - a
        work = _grow(work, L)
        for q in range(L):
            work[q] = indices[a + q]
        tracked = track[dims[j]]
        lv = 0
        if tracked:
            vwork[0] = j
            lv = 1
        while L > 0:
            k = pivot_col[work[L - 1]]
            if k < 0:
                break
            lk = r_len[k]
            tmp = _grow(tmp, L + lk)
            L = _xor_merge(work, L, r_data[r_start[k]:r_start[k] + lk], lk, tmp)
            work, tmp = tmp, work
            if tracked:
                lvk = v_len[k]
                vtmp = _grow(vtmp, lv + lvk)
                lv = _xor_merge(vwork, lv, v_data[v_start[k]:v_start[k] + lvk], lvk, vtmp)
                vwork, vtmp = vtmp, vwork
            additions += 1
        if L > 0:
            p = work[L - 1]
            low[j] = p
            pivot_col[p] = j
            if clearing:
                cleared[p] = True
            r_data = _grow(r_data, r_used + L)
            r_start[j] = r_used
            r_len[j] = L
            for q in range(L):
                r_data[r_used + q] = work[q]
            r_used += L
        else:
            r_start[j] = r_used
        if tracked:
            v_data = _grow(v_data, v_used + lv)
            v_start[j] = v_used
            v_len[j] = lv
            for q in range(lv):
                v_data[v_used + q] = vwork[q]
            v_used += lv
    return low, r_start, r_len, r_data[:r_used].copy(), v_start, v_len, v_data[:v_used].copy(), additions


def reduce_numba(indptr, indices, order, dims, clearing, track):
    return _reduce_kernel(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
        np.ascontiguousarray(dims, dtype=np.int64),
        bool(clearing),
        np.ascontiguousarray(track, dtype=np.bool_),
    )


def reduce_numpy(indptr, indices, order, dims, clearing, track):
    m = len(indptr) - 1
    low = np.full(m, -1, dtype=np.int64)
    pivot_col = {}
    cleared = np.zeros(m, dtype=bool)
    empty = np.empty(0, dtype=np.int64)
    R = [empty] * m
    V = [empty] * m
    additions = 0
    for j in order:
        j = int(j)
        if clearing and cleared[j]:
            continue
        col = np.asarray(indices[indptr[j]:indptr[j + 1]], dtype=np.int64)
        tracked = bool(track[dims[j]])
        v = np.array([j], dtype=np.int64) if tracked else empty
        while col.size:
            k = pivot_col.get(int(col[-1]))
            if k is None:
                break
            col = np.setxor1d(col, R[k], assume_unique=True)
            if tracked:
                v = np.setxor1d(v, V[k], assume_unique=True)
            additions += 1
        if col.size:
            p = int(col[-1])
            low[j] = p
            pivot_col[p] = j
            if clearing:
                cleared[p] = True
            R[j] = col
        if tracked:
            V[j] = v

    # pack into the same flat layout as the compiled kernel, in processing order
    r_start = np.zeros(m, dtype=np.int64)
    r_len = np.zeros(m, dtype=np.int64)
    v_start = np.zeros(m, dtype=np.int64)
    v_len = np.zeros(m, dtype=np.int64)
    r_parts, v_parts = [], []
    r_used = v_used = 0
    for j in order:
        j = int(j)
        r_start[j] = r_used
        r_len[j] = R[j].size
        r_parts.append(R[j])
        r_used += R[j].size
        if V[j].size:
            v_start[j] = v_used
            v_len[j] = V[j].size
            v_parts.append(V[j])
            v_used += V[j].size
    r_data = np.concatenate(r_parts).astype(np.int64) if r_parts else empty
    v_data = np.concatenate(v_parts).astype(np.int64) if v_parts else empty
    return low, r_start, r_len, r_data, v_start, v_len, v_data, additions
