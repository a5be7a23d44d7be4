# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-edge kernels.

Every function works on a half-open range of nodes or edges and releases the
GIL, so callers can split work across threads. Sums are taken over values
sorted ascending; the fallback in ``_fallback.py`` uses the same order and
produces bit-identical results.
"""

cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc, qsort

ctypedef cnp.int64_t idx_t


cdef int _cmp_double(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*>a)[0]
    cdef double y = (<const double*>b)[0]
    return (x > y) - (x < y)


cdef inline double _sorted_sum(double* buf, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    if k > 1:
        qsort(buf, k, sizeof(double), _cmp_double)
    for i in range(k):
        acc += buf[i]
    return acc


def common_counts(const idx_t[:] indptr, const idx_t[:] indices,
                  const idx_t[:] edge_u, const idx_t[:] edge_v,
                  idx_t[:] out, Py_ssize_t lo, Py_ssize_t hi):
    """|N(u) & N(v)| for edges ``lo..hi``."""
    cdef Py_ssize_t e, i, j, iend, jend
    cdef idx_t a, b, k
    with nogil:
        for e in range(lo, hi):
            i = indptr[edge_u[e]]
            iend = indptr[edge_u[e] + 1]
            j = indptr[edge_v[e]]
            jend = indptr[edge_v[e] + 1]
            k = 0
            while i < iend and j < jend:
                a = indices[i]
                b = indices[j]
                if a < b:
                    i += 1
                elif a > b:
                    j += 1
                else:
                    k += 1
                    i += 1
                    j += 1
            out[e] = k


def node_sums(const idx_t[:] indptr, const idx_t[:] slot_edge,
              const double[:] vals, double[:] out,
              Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t max_degree):
    """Sum of incident edge values for nodes ``lo..hi``."""
    cdef Py_ssize_t u, i, k
    cdef double* buf = <double*>malloc((max_degree + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for u in range(lo, hi):
                k = 0
                for i in range(indptr[u], indptr[u + 1]):
                    buf[k] = vals[slot_edge[i]]
                    k += 1
                out[u] = _sorted_sum(buf, k)
    finally:
        free(buf)


def dss_edges(const idx_t[:] indptr, const idx_t[:] indices,
              const idx_t[:] slot_edge, const idx_t[:] edge_u,
              const idx_t[:] edge_v, const double[:] vals,
              const double[:] sums, double[:] out,
              Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t max_degree):
    """One synchronous DSS update for edges ``lo..hi``.

    Self-similarity is fixed at 1, so the x = u and x = v terms of the
    numerator contribute ``2 * (1 + s(u, v))``.
    """
    cdef Py_ssize_t e, i, j, iend, jend, k
    cdef idx_t a, b, u, v
    cdef double s, num, den
    cdef double* buf = <double*>malloc((max_degree + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for e in range(lo, hi):
                u = edge_u[e]
                v = edge_v[e]
                i = indptr[u]
                iend = indptr[u + 1]
                j = indptr[v]
                jend = indptr[v + 1]
                k = 0
                while i < iend and j < jend:
                    a = indices[i]
                    b = indices[j]
                    if a < b:
                        i += 1
                    elif a > b:
                        j += 1
                    else:
                        buf[k] = vals[slot_edge[i]] + vals[slot_edge[j]]
                        k += 1
                        i += 1
                        j += 1
                s = vals[e]
                num = 2.0 * (1.0 + s) + _sorted_sum(buf, k)
                den = sqrt(sums[u] * sums[v])
                out[e] = num / den
    finally:
        free(buf)
