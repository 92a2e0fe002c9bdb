# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_kernels_py``."""
import numpy as np

cdef enum:
    UNDEFINED = -1
    OVERFLOW = -2


def find_nonassociative(const long long[:, ::1] table):
    cdef Py_ssize_t n = table.shape[0], a, b, c
    cdef long long ab
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    return (a, b, c)
    return None


def natural_leq_matrix(const long long[:, ::1] table, const long long[::1] lam):
    cdef Py_ssize_t n = table.shape[0], s, t
    out = np.zeros((n, n), dtype=bool)
    cdef unsigned char[:, ::1] o = out.view(np.uint8)
    for s in range(n):
        for t in range(n):
            if table[t, lam[s]] == s:
                o[s, t] = 1
    return out


def find_ample_violation(const long long[:, ::1] table, const long long[::1] proj):
    cdef Py_ssize_t n = table.shape[0], s, t
    cdef long long v, u
    first_arr = np.empty(n, dtype=np.int64)
    stamp_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] first = first_arr
    cdef long long[::1] stamp = stamp_arr
    for s in range(n):
        for t in range(n):
            v = table[s, t]
            if stamp[v] != s:
                stamp[v] = s
                first[v] = t
                continue
            u = first[v]
            if table[proj[s], u] != table[proj[s], t]:
                return (s, u, t)
    return None


def find_order_split_violation(const long long[:, ::1] table, const long long[::1] lam,
                            const long long[::1] rho, leq_in):
    cdef const unsigned char[:, ::1] leq = np.ascontiguousarray(leq_in).view(np.uint8)
    cdef Py_ssize_t n = table.shape[0], s, t, y
    cdef long long lst, lt, ls
    cdef bint lhs, rhs
    for s in range(n):
        ls = lam[s]
        for t in range(n):
            lst = lam[table[s, t]]
            lt = lam[t]
            for y in range(n):
                lhs = leq[rho[y], lst]
                rhs = leq[rho[y], lt] and leq[rho[table[t, y]], ls]
                if lhs != rhs:
                    return (s, t, y)
    return None


def find_category_assoc_violation(const long long[:, ::1] comp):
    cdef Py_ssize_t n = comp.shape[0], a, b, c
    cdef long long ab, bc, x, y
    cdef long long skipped = 0
    for a in range(n):
        for b in range(n):
            ab = comp[a, b]
            if ab == UNDEFINED:
                continue
            for c in range(n):
                bc = comp[b, c]
                if bc == UNDEFINED:
                    continue
                if ab < 0 or bc < 0:
                    skipped += 1
                    continue
                x = comp[ab, c]
                y = comp[a, bc]
                if x == OVERFLOW or y == OVERFLOW:
                    skipped += 1
                    continue
                if x != y or x < 0:
                    return (a, b, c), skipped
    return None, skipped


def find_left_cancel_violation(const long long[:, ::1] comp):
    cdef Py_ssize_t n = comp.shape[0], x, y
    cdef long long z, skipped = 0
    first_arr = np.empty(n, dtype=np.int64)
    stamp_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] first = first_arr
    cdef long long[::1] stamp = stamp_arr
    for x in range(n):
        for y in range(n):
            z = comp[x, y]
            if z == UNDEFINED:
                continue
            if z == OVERFLOW:
                skipped += 1
                continue
            if stamp[z] != x:
                stamp[z] = x
                first[z] = y
            elif first[z] != y:
                return (x, first[z], y), skipped
    return None, skipped


def conv_accumulate(const long long[::1] xs, const long long[::1] ys,
                    const long long[::1] zs, const double complex[::1] f,
                    const double complex[::1] g, double complex[::1] out):
    cdef Py_ssize_t k
    for k in range(xs.shape[0]):
        out[zs[k]] += f[xs[k]] * g[ys[k]]
