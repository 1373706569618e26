# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_pykernels`` exactly."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


cdef Py_ssize_t _label(const int64_t[::1] indptr, const int64_t[::1] indices,
                       const uint8_t[::1] alive, int64_t[::1] labels,
                       int64_t[::1] sizes, int64_t[::1] queue) noexcept nogil:
    cdef Py_ssize_t n = alive.shape[0]
    cdef Py_ssize_t s, v, w, j, head, tail
    cdef Py_ssize_t ncomp = 0
    for s in range(n):
        labels[s] = -1
    for s in range(n):
        if not alive[s] or labels[s] >= 0:
            continue
        labels[s] = ncomp
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if alive[w] and labels[w] < 0:
                    labels[w] = ncomp
                    queue[tail] = w
                    tail += 1
        sizes[ncomp] = tail
        ncomp += 1
    return ncomp


def component_labels(const int64_t[::1] indptr, const int64_t[::1] indices,
                     const uint8_t[::1] alive):
    cdef Py_ssize_t n = alive.shape[0]
    labels = np.empty(n, dtype=np.int64)
    sizes = np.empty(max(n, 1), dtype=np.int64)
    queue = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] lv = labels
    cdef int64_t[::1] sv = sizes
    cdef int64_t[::1] qv = queue
    cdef Py_ssize_t ncomp
    with nogil:
        ncomp = _label(indptr, indices, alive, lv, sv, qv)
    return labels, sizes[:ncomp].copy()


def prune_to_giant(const int64_t[::1] indptr, const int64_t[::1] indices,
                   uint8_t[::1] alive):
    cdef Py_ssize_t n = alive.shape[0]
    labels = np.empty(n, dtype=np.int64)
    sizes = np.empty(max(n, 1), dtype=np.int64)
    queue = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] lv = labels
    cdef int64_t[::1] sv = sizes
    cdef int64_t[::1] qv = queue
    cdef Py_ssize_t ncomp, i, best = 0
    cdef int64_t removed = 0
    with nogil:
        ncomp = _label(indptr, indices, alive, lv, sv, qv)
        if ncomp > 1:
            for i in range(1, ncomp):
                if sv[i] > sv[best]:
                    best = i
            for i in range(n):
                if lv[i] >= 0 and lv[i] != best:
                    alive[i] = 0
                    removed += 1
    return removed


def alive_degrees(const int64_t[::1] indptr, const int64_t[::1] indices,
                  const uint8_t[::1] alive):
    cdef Py_ssize_t n = alive.shape[0]
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t v, j
    cdef int64_t d
    with nogil:
        for v in range(n):
            if alive[v]:
                d = 0
                for j in range(indptr[v], indptr[v + 1]):
                    if alive[indices[j]]:
                        d += 1
                ov[v] = d
    return out


def fail_unsupported_power(const int64_t[::1] sup_indptr, const int64_t[::1] sup_indices,
                           const uint8_t[::1] comm_alive, uint8_t[::1] power_alive):
    cdef Py_ssize_t b, j
    cdef bint supported
    cdef int64_t removed = 0
    with nogil:
        for b in range(power_alive.shape[0]):
            if not power_alive[b]:
                continue
            supported = False
            for j in range(sup_indptr[b], sup_indptr[b + 1]):
                if comm_alive[sup_indices[j]]:
                    supported = True
                    break
            if not supported:
                power_alive[b] = 0
                removed += 1
    return removed


def fail_unsupported_comm(const int64_t[::1] support_of_comm,
                          const uint8_t[::1] power_alive, uint8_t[::1] comm_alive):
    cdef Py_ssize_t a
    cdef int64_t removed = 0
    with nogil:
        for a in range(comm_alive.shape[0]):
            if comm_alive[a] and not power_alive[support_of_comm[a]]:
                comm_alive[a] = 0
                removed += 1
    return removed


def weighted_sample(const int64_t[::1] weights, const double[::1] uniforms):
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t k = uniforms.shape[0]
    tree_arr = np.zeros(n + 1, dtype=np.int64)
    w_arr = np.array(weights, dtype=np.int64)
    picks_arr = np.empty(k, dtype=np.int64)
    cdef int64_t[::1] tree = tree_arr
    cdef int64_t[::1] w = w_arr
    cdef int64_t[::1] picks = picks_arr
    cdef Py_ssize_t i, j, pos, nxt, step, top = 1, npicked = 0
    cdef int64_t total = 0, target, wi
    with nogil:
        for i in range(1, n + 1):
            tree[i] += w[i - 1]
            total += w[i - 1]
            j = i + (i & -i)
            if j <= n:
                tree[j] += tree[i]
        while top * 2 <= n:
            top *= 2
        for i in range(k):
            if total <= 0:
                break
            target = <int64_t>(uniforms[i] * <double>total)
            if target >= total:
                target = total - 1
            pos = 0
            step = top
            while step:
                nxt = pos + step
                if nxt <= n and tree[nxt] <= target:
                    pos = nxt
                    target -= tree[nxt]
                step >>= 1
            picks[npicked] = pos
            npicked += 1
            wi = w[pos]
            w[pos] = 0
            total -= wi
            j = pos + 1
            while j <= n:
                tree[j] -= wi
                j += j & -j
    return picks_arr[:npicked].copy()
