"""Pure-Python (numpy) implementations of the index-heavy kernels.

Each function here has a compiled twin in ``_ckernels.pyx`` with the same
signature; :mod:`qftschmidt.kernels` picks one at import time.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def realign(f, p1, q1, p2, q2):
    """out[a_r*q1 + a_c, b_r*q2 + b_c] = f[a_r*p2 + b_r, a_c*q2 + b_c]."""
    f = np.ascontiguousarray(f, dtype=np.complex128)
    t = f.reshape(p1, p2, q1, q2).transpose(0, 2, 1, 3)
    return np.ascontiguousarray(t.reshape(p1 * q1, p2 * q2))


def unrealign(m, p1, q1, p2, q2):
    m = np.ascontiguousarray(m, dtype=np.complex128)
    t = m.reshape(p1, q1, p2, q2).transpose(0, 2, 1, 3)
    return np.ascontiguousarray(t.reshape(p1 * p2, q1 * q2))


def rho_closed(n1, n2):
    """Closed-form reduced density of the bipartite QFT, shape (n2**2, n2**2)."""
    n = n1 * n2
    l1, l2 = np.divmod(np.arange(n2 * n2), n2)
    quad = (l1 * l2) % n
    phase = np.exp(1j * TWO_PI * ((quad[:, None] - quad[None, :]) % n) / n)
    # non-modular differences; both coordinates must be multiples of n1
    lattice = ((l1[:, None] - l1[None, :]) % n1 == 0) & ((l2[:, None] - l2[None, :]) % n1 == 0)
    return np.where(lattice, (n1 / n2) * phase, 0.0).astype(np.complex128)


def lattice_mismatches(n1, n2, overlap):
    """Count (l, m) pairs where ``[l - m in n1 Z^2]`` differs from ``overlap[l, m]``."""
    l1, l2 = np.divmod(np.arange(n2 * n2), n2)
    lattice = ((l1[:, None] - l1[None, :]) % n1 == 0) & ((l2[:, None] - l2[None, :]) % n1 == 0)
    return int(np.count_nonzero(lattice.astype(np.int64) != np.asarray(overlap, dtype=np.int64)))


def weighted_kron_sum(coeffs, lefts, rights):
    """sum_k coeffs[k] * kron(lefts[k], rights[k])."""
    lefts = np.asarray(lefts, dtype=np.complex128)
    rights = np.asarray(rights, dtype=np.complex128)
    k, a, b = lefts.shape
    _, c, d = rights.shape
    out = np.einsum("k,kab,kcd->acbd", np.asarray(coeffs, dtype=np.float64), lefts, rights)
    return out.reshape(a * c, b * d)
