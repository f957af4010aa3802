# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Mirrors gridpos._kernels_py exactly: same signatures, same results, same
overflow semantics (every product and difference must fit in signed 64
bits or ArithmeticOverflow is raised).  Enumeration loops run without the
GIL so callers can chunk work across threads.
"""

import numpy as np

from .errors import ArithmeticOverflow, InvariantViolation

cdef extern from *:
    bint __builtin_mul_overflow(long long, long long, long long*) nogil
    bint __builtin_sub_overflow(long long, long long, long long*) nogil

cdef enum:
    MAX_M = 12   # max tuple size handled by the stack buffers
    MAX_D = 12   # max ambient dimension
    ERR_OVERFLOW = 1
    ERR_DIVISION = 2


cdef int _rank_diffs(const long long[:, ::1] pts, Py_ssize_t* idx, int npts,
                     int d, int stop_above, int* status) noexcept nogil:
    """Rank of the difference vectors of pts[idx[1..npts)] against pts[idx[0]].

    Early-exits with stop_above + 1 once the rank provably exceeds it.
    On arithmetic failure sets *status and returns -1.
    """
    cdef long long M[(MAX_M - 1) * MAX_D]
    cdef int m = npts - 1
    cdef int i, j, col, piv, pr
    cdef long long prev, p, a, t1, t2, num, v

    for i in range(m):
        for j in range(d):
            if __builtin_sub_overflow(pts[idx[i + 1], j], pts[idx[0], j], &v):
                status[0] = ERR_OVERFLOW
                return -1
            M[i * d + j] = v
    piv = 0
    prev = 1
    for col in range(d):
        if piv == m:
            break
        pr = -1
        for i in range(piv, m):
            if M[i * d + col] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != piv:
            for j in range(col, d):
                v = M[piv * d + j]
                M[piv * d + j] = M[pr * d + j]
                M[pr * d + j] = v
        p = M[piv * d + col]
        for i in range(piv + 1, m):
            a = M[i * d + col]
            for j in range(col + 1, d):
                if __builtin_mul_overflow(p, M[i * d + j], &t1):
                    status[0] = ERR_OVERFLOW
                    return -1
                if __builtin_mul_overflow(a, M[piv * d + j], &t2):
                    status[0] = ERR_OVERFLOW
                    return -1
                if __builtin_sub_overflow(t1, t2, &num):
                    status[0] = ERR_OVERFLOW
                    return -1
                if num % prev != 0:
                    status[0] = ERR_DIVISION
                    return -1
                M[i * d + j] = num / prev
            M[i * d + col] = 0
        prev = p
        piv += 1
        if piv > stop_above:
            return piv
    return piv


cdef inline bint _rank_leq(const long long[:, ::1] pts, Py_ssize_t* idx, int npts,
                           int d, int kmax, int* status) noexcept nogil:
    cdef int r
    if npts - 1 <= kmax:
        return True
    r = _rank_diffs(pts, idx, npts, d, kmax, status)
    if r < 0:
        return False
    return r <= kmax


cdef void _raise_status(int status):
    if status == ERR_OVERFLOW:
        raise ArithmeticOverflow("intermediate value leaves the signed 64-bit range")
    if status == ERR_DIVISION:
        raise InvariantViolation("nonexact division in fraction-free step")


def census_scan(pts_array, int k, Py_ssize_t lo, Py_ssize_t hi, bint collect):
    """Scan (k+2)-subsets; count those on a k-flat split by degeneracy."""
    cdef const long long[:, ::1] pts = np.ascontiguousarray(pts_array, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    cdef int m = k + 2
    if m > MAX_M or d > MAX_D:
        raise ValueError("tuple size or dimension beyond compiled kernel limits")
    cdef Py_ssize_t c[MAX_M]
    cdef Py_ssize_t sub[MAX_M]
    cdef long long nondeg = 0, deg = 0
    cdef Py_ssize_t first, j, t
    cdef int i, drop, status = 0
    cdef bint degenerate, onflat
    cdef Py_ssize_t cap = 1024, used = 0
    cdef long long[::1] edges_buf = np.empty(cap * m, dtype=np.int64)

    if hi > n - m + 1:
        hi = n - m + 1
    with nogil:
        for first in range(lo, hi):
            for i in range(m):
                c[i] = first + i
            while True:
                onflat = _rank_leq(pts, c, m, d, k, &status)
                if status != 0:
                    break
                if onflat:
                    degenerate = False
                    for drop in range(m):
                        t = 0
                        for i in range(m):
                            if i != drop:
                                sub[t] = c[i]
                                t += 1
                        if _rank_leq(pts, sub, m - 1, d, k - 1, &status):
                            degenerate = True
                            break
                        if status != 0:
                            break
                    if status != 0:
                        break
                    if degenerate:
                        deg += 1
                    else:
                        nondeg += 1
                        if collect:
                            if used == cap:
                                with gil:
                                    cap *= 2
                                    grown = np.empty(cap * m, dtype=np.int64)
                                    grown[: used * m] = np.asarray(edges_buf[: used * m])
                                    edges_buf = grown
                            for i in range(m):
                                edges_buf[used * m + i] = c[i]
                            used += 1
                # advance to the next combination with this first index
                j = m - 1
                while j >= 1 and c[j] == n - m + j:
                    j -= 1
                if j == 0:
                    break
                c[j] += 1
                for t in range(j + 1, m):
                    c[t] = c[t - 1] + 1
            if status != 0:
                break
    _raise_status(status)
    out = None
    if collect:
        out = np.asarray(edges_buf[: used * m]).copy().reshape(used, m)
    return int(nondeg), int(deg), out


def count_low_rank(pts_array, int size, int rmax, Py_ssize_t lo, Py_ssize_t hi):
    """Count size-subsets whose affine rank is <= rmax."""
    cdef const long long[:, ::1] pts = np.ascontiguousarray(pts_array, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    if size > MAX_M or d > MAX_D:
        raise ValueError("tuple size or dimension beyond compiled kernel limits")
    cdef Py_ssize_t c[MAX_M]
    cdef long long total = 0
    cdef Py_ssize_t first, j, t
    cdef int i, status = 0

    if hi > n - size + 1:
        hi = n - size + 1
    with nogil:
        for first in range(lo, hi):
            for i in range(size):
                c[i] = first + i
            while True:
                if _rank_leq(pts, c, size, d, rmax, &status):
                    total += 1
                if status != 0:
                    break
                j = size - 1
                while j >= 1 and c[j] == n - size + j:
                    j -= 1
                if j == 0:
                    break
                c[j] += 1
                for t in range(j + 1, size):
                    c[t] = c[t - 1] + 1
            if status != 0:
                break
    _raise_status(status)
    return int(total)


def collect_low_rank(pts_array, int size, int rmax):
    """All size-subsets with rank <= rmax, as an (E, size) int64 index array."""
    cdef const long long[:, ::1] pts = np.ascontiguousarray(pts_array, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    if size > MAX_M or d > MAX_D:
        raise ValueError("tuple size or dimension beyond compiled kernel limits")
    cdef Py_ssize_t c[MAX_M]
    cdef Py_ssize_t first, j, t
    cdef int i, status = 0
    found = []

    cdef Py_ssize_t hi = n - size + 1
    with nogil:
        for first in range(0, hi):
            for i in range(size):
                c[i] = first + i
            while True:
                if _rank_leq(pts, c, size, d, rmax, &status):
                    with gil:
                        found.append([c[i] for i in range(size)])
                if status != 0:
                    break
                j = size - 1
                while j >= 1 and c[j] == n - size + j:
                    j -= 1
                if j == 0:
                    break
                c[j] += 1
                for t in range(j + 1, size):
                    c[t] = c[t - 1] + 1
            if status != 0:
                break
    _raise_status(status)
    return np.array(found, dtype=np.int64).reshape(len(found), size)


def find_low_rank(pts_array, int size, int rmax):
    """First (lex) size-subset with rank <= rmax, or None."""
    cdef const long long[:, ::1] pts = np.ascontiguousarray(pts_array, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    if size > MAX_M or d > MAX_D:
        raise ValueError("tuple size or dimension beyond compiled kernel limits")
    cdef Py_ssize_t c[MAX_M]
    cdef Py_ssize_t first, j, t
    cdef int i, status = 0
    cdef bint hit = False

    cdef Py_ssize_t hi = n - size + 1
    with nogil:
        for first in range(0, hi):
            for i in range(size):
                c[i] = first + i
            while True:
                if _rank_leq(pts, c, size, d, rmax, &status):
                    hit = True
                    break
                if status != 0:
                    break
                j = size - 1
                while j >= 1 and c[j] == n - size + j:
                    j -= 1
                if j == 0:
                    break
                c[j] += 1
                for t in range(j + 1, size):
                    c[t] = c[t - 1] + 1
            if hit or status != 0:
                break
    _raise_status(status)
    if hit:
        return tuple(c[i] for i in range(size))
    return None
