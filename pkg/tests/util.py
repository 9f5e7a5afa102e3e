"""Shared helpers for the test suite."""

import numpy as np


def global_phase_eq(a, b, tol=1e-10):
    """True when a == e^{i phi} b for a single phase phi."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < 1e-14:
        return False
    ph = a[idx] / b[idx]
    return abs(abs(ph) - 1) < tol and np.max(np.abs(a - ph * b)) < tol


def perm_matrix(perm, n):
    """Wire-basis -> logical-basis reordering for perm[w] = logical at wire w."""
    dim = 1 << n
    mat = np.zeros((dim, dim))
    for i in range(dim):
        j = 0
        for w in range(n):
            bit = (i >> (n - 1 - w)) & 1
            j |= bit << (n - 1 - perm[w])
        mat[j, i] = 1
    return mat


def logical_distribution(circuit, hist):
    """Histogram (wire-order counts) -> normalized logical distribution."""
    m = len(circuit.measured_wires)
    out = np.zeros(1 << m)
    for bits, c in hist.counts.items():
        lab = [None] * m
        for k, label in enumerate(circuit.measured_readout):
            lab[label] = bits[k]
        out[int("".join(lab), 2)] = c
    return out / out.sum()
