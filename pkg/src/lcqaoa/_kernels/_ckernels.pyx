# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; behaviour mirrors ``_pykernels`` function for function."""

import numpy as np
from libc.math cimport cos, sin


cdef inline void _apply_1q(double complex[::1] state, Py_ssize_t q,
                           double complex m00, double complex m01,
                           double complex m10, double complex m11) noexcept nogil:
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t blk, j
    cdef double complex a0, a1
    blk = 0
    while blk < dim:
        for j in range(blk, blk + stride):
            a0 = state[j]
            a1 = state[j + stride]
            state[j] = m00 * a0 + m01 * a1
            state[j + stride] = m10 * a0 + m11 * a1
        blk += 2 * stride


def apply_1q(double complex[::1] state, int n, int q, double complex m00,
             double complex m01, double complex m10, double complex m11):
    with nogil:
        _apply_1q(state, q, m00, m01, m10, m11)


def apply_1q_all(double complex[::1] state, int n, double complex m00,
                 double complex m01, double complex m10, double complex m11):
    cdef Py_ssize_t q
    with nogil:
        for q in range(n):
            _apply_1q(state, q, m00, m01, m10, m11)


def apply_rzz(double complex[::1] state, int n, int a, int b, double theta):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t z
    cdef double c = cos(theta / 2), s = sin(theta / 2)
    cdef double complex same = c - 1j * s
    cdef double complex diff = c + 1j * s
    with nogil:
        for z in range(dim):
            if ((z >> a) ^ (z >> b)) & 1:
                state[z] = state[z] * diff
            else:
                state[z] = state[z] * same


def apply_swap(double complex[::1] state, int n, int a, int b):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t z, partner
    cdef Py_ssize_t ma = (<Py_ssize_t>1) << a
    cdef Py_ssize_t mb = (<Py_ssize_t>1) << b
    cdef double complex tmp
    with nogil:
        for z in range(dim):
            if (z & ma) and not (z & mb):
                partner = z ^ ma ^ mb
                tmp = state[z]
                state[z] = state[partner]
                state[partner] = tmp


def apply_phase_table(double complex[::1] state, const Py_ssize_t[::1] index,
                      const double complex[::1] table):
    cdef Py_ssize_t z
    with nogil:
        for z in range(state.shape[0]):
            state[z] = state[z] * table[index[z]]


def expectation_diag(const double complex[::1] state, const double[::1] values):
    cdef Py_ssize_t z
    cdef double acc = 0.0
    cdef double re, im
    with nogil:
        for z in range(state.shape[0]):
            re = state[z].real
            im = state[z].imag
            acc += (re * re + im * im) * values[z]
    return acc


def build_diagonal(int n, const long[::1] us, const long[::1] vs, const double[::1] ws):
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n
    out = np.zeros(dim, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t z, e
    cdef Py_ssize_t m = us.shape[0]
    cdef double acc
    with nogil:
        for z in range(dim):
            acc = 0.0
            for e in range(m):
                if ((z >> us[e]) ^ (z >> vs[e])) & 1:
                    acc -= ws[e]
                else:
                    acc += ws[e]
            o[z] = acc
    return out


def bit_flip_sweep(const long[::1] indptr, const long[::1] nbrs, const double[::1] weights,
                   signed char[::1] x, const long[::1] order):
    cdef Py_ssize_t accepted = 0, sweeps = 0
    cdef Py_ssize_t t, i, k
    cdef bint changed
    cdef double gain
    cdef signed char xi
    with nogil:
        while True:
            sweeps += 1
            changed = False
            for t in range(order.shape[0]):
                i = order[t]
                xi = x[i]
                gain = 0.0
                for k in range(indptr[i], indptr[i + 1]):
                    if x[nbrs[k]] == xi:
                        gain += weights[k]
                    else:
                        gain -= weights[k]
                if gain > 0.0:
                    x[i] = 1 - xi
                    accepted += 1
                    changed = True
            if not changed:
                break
    return accepted, sweeps


cdef struct BnB:
    Py_ssize_t n
    const long* indptr
    const long* nbrs
    const double* weights
    double* to0
    double* to1
    signed char* side
    signed char* best_x
    double best
    bint found
    double eps


cdef double _assign(BnB* s, Py_ssize_t v, int sd, double* internal) noexcept nogil:
    cdef Py_ssize_t k, u
    cdef double gained = s.to1[v] if sd == 0 else s.to0[v]
    internal[0] = 0.0
    s.side[v] = sd
    for k in range(s.indptr[v], s.indptr[v + 1]):
        u = s.nbrs[k]
        if s.side[u] < 0:
            internal[0] += s.weights[k]
            if sd == 0:
                s.to0[u] += s.weights[k]
            else:
                s.to1[u] += s.weights[k]
    return gained


cdef void _unassign(BnB* s, Py_ssize_t v, int sd) noexcept nogil:
    cdef Py_ssize_t k, u
    s.side[v] = -1
    for k in range(s.indptr[v], s.indptr[v + 1]):
        u = s.nbrs[k]
        if s.side[u] < 0:
            if sd == 0:
                s.to0[u] -= s.weights[k]
            else:
                s.to1[u] -= s.weights[k]


cdef void _recurse(BnB* s, Py_ssize_t v, double cut, double remaining) noexcept nogil:
    cdef Py_ssize_t u
    cdef double bound, gained, internal
    cdef int sd
    if v == s.n:
        if cut > s.best + s.eps or (not s.found and cut >= s.best - s.eps):
            s.best = cut
            s.found = True
            for u in range(s.n):
                s.best_x[u] = s.side[u]
        return
    bound = cut + remaining
    for u in range(v, s.n):
        bound += s.to0[u] if s.to0[u] > s.to1[u] else s.to1[u]
    if s.found:
        if bound <= s.best + s.eps:
            return
    elif bound < s.best - s.eps:
        return
    for sd in range(2):
        gained = _assign(s, v, sd, &internal)
        _recurse(s, v + 1, cut + gained, remaining - internal)
        _unassign(s, v, sd)


def maxcut_bnb(int n, const long[::1] indptr, const long[::1] nbrs, const double[::1] weights,
               double incumbent, signed char[::1] best_x, double eps):
    to0 = np.zeros(n, dtype=np.float64)
    to1 = np.zeros(n, dtype=np.float64)
    side = np.full(n, -1, dtype=np.int8)
    cdef double[::1] t0 = to0
    cdef double[::1] t1 = to1
    cdef signed char[::1] sv = side
    cdef BnB s
    cdef Py_ssize_t i, k
    cdef double remaining = 0.0, gained, internal
    s.n = n
    s.indptr = &indptr[0]
    s.nbrs = &nbrs[0] if nbrs.shape[0] > 0 else NULL
    s.weights = &weights[0] if weights.shape[0] > 0 else NULL
    s.to0 = &t0[0]
    s.to1 = &t1[0]
    s.side = &sv[0]
    s.best_x = &best_x[0]
    s.best = incumbent
    s.found = False
    s.eps = eps
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            if nbrs[k] > i:
                remaining += weights[k]
    with nogil:
        gained = _assign(&s, 0, 0, &internal)
        _recurse(&s, 1, gained, remaining - internal)
    return s.best
