"""Pure numpy implementation of the walk kernels.

Same signatures as the compiled ``_kernels`` module.  Segment sums use
``np.add.reduceat`` over arcs grouped by terminus in ascending index order.
"""
import numpy as np


def apply_step(psi, signs, weights, in_ptr, in_arcs, inverse):
    p = signs * psi
    seg = np.add.reduceat((weights * p)[in_arcs], in_ptr[:-1])
    counts = np.diff(in_ptr)
    acc = np.repeat(2.0 * seg, counts)
    out = np.empty_like(p)
    out[inverse[in_arcs]] = weights[in_arcs] * acc - p[in_arcs]
    return out


def evolve(psi, steps, signs, weights, in_ptr, in_arcs, inverse):
    cur = np.array(psi, dtype=np.complex128, copy=True)
    for _ in range(steps):
        cur = apply_step(cur, signs, weights, in_ptr, in_arcs, inverse)
    return cur


def _arm_probs(psi, arm_of_arc, num_arms):
    return np.bincount(arm_of_arc, weights=psi.real**2 + psi.imag**2, minlength=num_arms)


def sweep(psi, steps, signs, weights, in_ptr, in_arcs, inverse, arm_of_arc, num_arms):
    table = np.zeros((steps + 1, num_arms))
    cur = np.array(psi, dtype=np.complex128, copy=True)
    table[0] = _arm_probs(cur, arm_of_arc, num_arms)
    for t in range(steps):
        cur = apply_step(cur, signs, weights, in_ptr, in_arcs, inverse)
        table[t + 1] = _arm_probs(cur, arm_of_arc, num_arms)
    return table, cur
