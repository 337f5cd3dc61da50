# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels mirroring ``webir._pykernels`` operation for operation."""

from libc.math cimport sqrt, fabs
from libc.stdint cimport int64_t, uint64_t

cdef uint64_t FNV_OFFSET_BASIS = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef uint64_t TOKEN_SEPARATOR = 0x1F


def pagerank_sweep(const int64_t[:] indptr, const int64_t[:] indices,
                   const int64_t[:] outdeg, const int64_t[:] dangling,
                   const double[:] old, double[:] new,
                   double damping, double base, bint redistribute):
    cdef Py_ssize_t n = old.shape[0]
    cdef Py_ssize_t i, k, j
    cdef int64_t p
    cdef double s, value, mass, share = 0.0, residual = 0.0
    if redistribute:
        mass = 0.0
        for k in range(dangling.shape[0]):
            mass += old[dangling[k]]
        share = mass / n
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            s += old[j] / outdeg[j]
        value = base + damping * (s + share)
        new[i] = value
        residual += fabs(value - old[i])
    return residual


cdef double _normalize(double[:] vec) nogil:
    cdef Py_ssize_t i, n = vec.shape[0]
    cdef double total = 0.0, norm
    for i in range(n):
        total += vec[i] * vec[i]
    norm = sqrt(total)
    if norm > 0.0:
        for i in range(n):
            vec[i] = vec[i] / norm
    return norm


def hits_sweep(const int64_t[:] in_indptr, const int64_t[:] in_indices,
               const int64_t[:] out_indptr, const int64_t[:] out_indices,
               const double[:] auth, const double[:] hub,
               double[:] new_auth, double[:] new_hub):
    cdef Py_ssize_t n = auth.shape[0]
    cdef Py_ssize_t i
    cdef int64_t p
    cdef double s, x, da = 0.0, dh = 0.0
    for i in range(n):
        s = 0.0
        for p in range(in_indptr[i], in_indptr[i + 1]):
            s += hub[in_indices[p]]
        new_auth[i] = s
    for i in range(n):
        s = 0.0
        for p in range(out_indptr[i], out_indptr[i + 1]):
            s += new_auth[out_indices[p]]
        new_hub[i] = s
    _normalize(new_auth)
    _normalize(new_hub)
    for i in range(n):
        x = fabs(new_auth[i] - auth[i])
        if x > da:
            da = x
        x = fabs(new_hub[i] - hub[i])
        if x > dh:
            dh = x
    return da, dh


def fnv1a64(const unsigned char[:] data):
    cdef uint64_t h = FNV_OFFSET_BASIS
    cdef Py_ssize_t i
    for i in range(data.shape[0]):
        h = (h ^ data[i]) * FNV_PRIME
    return h


def fingerprint_windows(list tokens, Py_ssize_t w):
    cdef Py_ssize_t start, pos, i, n = len(tokens)
    cdef uint64_t h
    cdef bytes tok
    cdef const unsigned char* buf
    cdef Py_ssize_t length
    out = []
    for start in range(n - w + 1):
        h = FNV_OFFSET_BASIS
        for pos in range(start, start + w):
            if pos != start:
                h = (h ^ TOKEN_SEPARATOR) * FNV_PRIME
            tok = <bytes>tokens[pos]
            buf = tok
            length = len(tok)
            for i in range(length):
                h = (h ^ buf[i]) * FNV_PRIME
        out.append(h)
    return out


def intersect_count(const uint64_t[:] a, const uint64_t[:] b):
    cdef Py_ssize_t i = 0, j = 0, na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t count = 0
    cdef uint64_t x, y
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x == y:
            count += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return count
