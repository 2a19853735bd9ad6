# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled trial kernel: pairwise link draws plus union-find over one node set.

Consumes pre-generated positions and pair uniforms so that results are
bit-identical to the pure-Python fallback; only the O(N^2) inner loop is
compiled.  Pair k corresponds to (i, j), i < j, in row-major condensed
order (the same ordering scipy's pdist uses).
"""

from libc.math cimport exp, pow

import numpy as np

BACKEND = "cython"

FAMILY_MIMO = 0
FAMILY_RAYLEIGH = 1
FAMILY_HARD_DISK = 2


cdef Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t i) noexcept nogil:
    while parent[i] != i:
        parent[i] = parent[parent[i]]  # path halving
        i = parent[i]
    return i


def pair_graph_stats(double[:, ::1] pos, double[::1] u, int family,
                     double beta, double eta, double r0):
    """Return (component_count, min_degree) of the random link graph."""
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, k, ri, rj
    cdef double dx, dy, dz, d2, x, e, hij, r0sq, half_eta
    cdef Py_ssize_t ncomp, mindeg

    if n == 1:
        return 1, 0
    parent_arr = np.arange(n, dtype=np.intp)
    degree_arr = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = parent_arr
    cdef Py_ssize_t[::1] degree = degree_arr

    r0sq = r0 * r0
    half_eta = 0.5 * eta
    k = 0
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                dz = pos[i, 2] - pos[j, 2]
                d2 = dx * dx + dy * dy + dz * dz
                if family == 0:  # MIMO MRC 2x2
                    x = beta * d2
                    e = exp(-x)
                    hij = e * (x * x + 2.0 - e)
                elif family == 1:  # Rayleigh
                    if eta == 2.0:
                        hij = exp(-beta * d2)
                    else:
                        hij = exp(-beta * pow(d2, half_eta))
                else:
                    hij = 1.0 if d2 <= r0sq else 0.0
                if u[k] < hij:
                    degree[i] += 1
                    degree[j] += 1
                    ri = _find(parent, i)
                    rj = _find(parent, j)
                    if ri != rj:
                        parent[rj] = ri
                k += 1

        ncomp = 0
        mindeg = degree[0]
        for i in range(n):
            if _find(parent, i) == i:
                ncomp += 1
            if degree[i] < mindeg:
                mindeg = degree[i]
    return int(ncomp), int(mindeg)
