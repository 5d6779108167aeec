# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled walk kernels.

One step applies the oracle signs, then at every vertex the reflection
``2 x x^T - I`` over the incoming arcs, and writes each result onto the
reversed arc.  Inner products run in ascending arc order so the output does
not depend on how the loop is scheduled.
"""
import numpy as np

ctypedef double complex cplx


cdef void _step(const cplx[::1] psi, cplx[::1] out, const double[::1] signs,
                const double[::1] weights, const Py_ssize_t[::1] in_ptr,
                const Py_ssize_t[::1] in_arcs, const Py_ssize_t[::1] inverse) noexcept nogil:
    cdef Py_ssize_t v, k, a
    cdef cplx acc
    for v in range(in_ptr.shape[0] - 1):
        acc = 0
        for k in range(in_ptr[v], in_ptr[v + 1]):
            a = in_arcs[k]
            acc = acc + weights[a] * (signs[a] * psi[a])
        acc = 2.0 * acc
        for k in range(in_ptr[v], in_ptr[v + 1]):
            a = in_arcs[k]
            out[inverse[a]] = weights[a] * acc - signs[a] * psi[a]


cdef void _arm_probs(const cplx[::1] psi, const Py_ssize_t[::1] arm_of_arc,
                     double[::1] row) noexcept nogil:
    cdef Py_ssize_t a
    cdef cplx z
    for a in range(row.shape[0]):
        row[a] = 0.0
    for a in range(psi.shape[0]):
        z = psi[a]
        row[arm_of_arc[a]] += z.real * z.real + z.imag * z.imag


def apply_step(psi, signs, weights, in_ptr, in_arcs, inverse):
    cdef const cplx[::1] src = psi
    out = np.empty(src.shape[0], dtype=np.complex128)
    cdef cplx[::1] dst = out
    cdef const double[::1] sg = signs
    cdef const double[::1] w = weights
    cdef const Py_ssize_t[::1] ptr = in_ptr
    cdef const Py_ssize_t[::1] arcs = in_arcs
    cdef const Py_ssize_t[::1] inv = inverse
    with nogil:
        _step(src, dst, sg, w, ptr, arcs, inv)
    return out


def evolve(psi, Py_ssize_t steps, signs, weights, in_ptr, in_arcs, inverse):
    cdef Py_ssize_t n = psi.shape[0], t
    cur = np.array(psi, dtype=np.complex128, copy=True)
    nxt = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] a = cur
    cdef cplx[::1] b = nxt
    cdef cplx[::1] tmp
    cdef const double[::1] sg = signs
    cdef const double[::1] w = weights
    cdef const Py_ssize_t[::1] ptr = in_ptr
    cdef const Py_ssize_t[::1] arcs = in_arcs
    cdef const Py_ssize_t[::1] inv = inverse
    with nogil:
        for t in range(steps):
            _step(a, b, sg, w, ptr, arcs, inv)
            tmp = a
            a = b
            b = tmp
    return np.asarray(a)


def sweep(psi, Py_ssize_t steps, signs, weights, in_ptr, in_arcs, inverse,
          arm_of_arc, Py_ssize_t num_arms):
    """Per-arm terminus probabilities for ``t = 0..steps``; returns (table, final state)."""
    cdef Py_ssize_t n = psi.shape[0], t
    table = np.zeros((steps + 1, num_arms), dtype=np.float64)
    cur = np.array(psi, dtype=np.complex128, copy=True)
    nxt = np.empty(n, dtype=np.complex128)
    cdef double[:, ::1] tab = table
    cdef cplx[::1] a = cur
    cdef cplx[::1] b = nxt
    cdef cplx[::1] tmp
    cdef const double[::1] sg = signs
    cdef const double[::1] w = weights
    cdef const Py_ssize_t[::1] ptr = in_ptr
    cdef const Py_ssize_t[::1] arcs = in_arcs
    cdef const Py_ssize_t[::1] inv = inverse
    cdef const Py_ssize_t[::1] arm = arm_of_arc
    with nogil:
        _arm_probs(a, arm, tab[0])
        for t in range(steps):
            _step(a, b, sg, w, ptr, arcs, inv)
            tmp = a
            a = b
            b = tmp
            _arm_probs(a, arm, tab[t + 1])
    return table, np.asarray(a)
