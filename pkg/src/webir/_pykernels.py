"""Pure-Python kernels.

Same signatures and the same floating-point operation order as the
compiled ``_ckernels`` module, so both backends produce bit-identical
results. Arrays are ``array.array`` instances (or any indexable sequence).
"""

from math import sqrt

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
TOKEN_SEPARATOR = 0x1F
_MASK = 0xFFFFFFFFFFFFFFFF


def pagerank_sweep(indptr, indices, outdeg, dangling, old, new, damping, base, redistribute):
    """One Jacobi sweep: fill ``new`` from ``old``; return the L1 change."""
    n = len(old)
    share = 0.0
    if redistribute:
        mass = 0.0
        for k in dangling:
            mass += old[k]
        share = mass / n
    residual = 0.0
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            s += old[j] / outdeg[j]
        value = base + damping * (s + share)
        new[i] = value
        residual += abs(value - old[i])
    return residual


def _normalize(vec):
    total = 0.0
    for x in vec:
        total += x * x
    norm = sqrt(total)
    if norm > 0.0:
        for i in range(len(vec)):
            vec[i] = vec[i] / norm
    return norm


def hits_sweep(in_indptr, in_indices, out_indptr, out_indices, auth, hub, new_auth, new_hub):
    """Authority update, then hub update, then L2 normalization of both.

    Returns the max-norm change of (authority, hub).
    """
    n = len(auth)
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
    da = 0.0
    dh = 0.0
    for i in range(n):
        x = abs(new_auth[i] - auth[i])
        if x > da:
            da = x
        x = abs(new_hub[i] - hub[i])
        if x > dh:
            dh = x
    return da, dh


def fnv1a64(data):
    h = FNV_OFFSET_BASIS
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK
    return h


def fingerprint_windows(tokens, w):
    """FNV-1a hash of every length-``w`` window of UTF-8 encoded ``tokens``.

    Tokens inside a window are joined by a single 0x1F byte. Returns a list
    with one value per window (duplicates kept).
    """
    out = []
    for start in range(len(tokens) - w + 1):
        h = FNV_OFFSET_BASIS
        for pos in range(start, start + w):
            if pos != start:
                h = ((h ^ TOKEN_SEPARATOR) * FNV_PRIME) & _MASK
            for b in tokens[pos]:
                h = ((h ^ b) * FNV_PRIME) & _MASK
        out.append(h)
    return out


def intersect_count(a, b):
    """Size of the intersection of two ascending, duplicate-free sequences."""
    i = j = count = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x == y:
            count += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return count
