# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled index kernels; mirrors ``_kernels_py`` function for function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()


cdef inline long pmod(long a, long m) nogil:
    cdef long r = a % m
    return r + m if r < 0 else r


def realign(f, Py_ssize_t p1, Py_ssize_t q1, Py_ssize_t p2, Py_ssize_t q2):
    cdef double complex[:, ::1] src = np.ascontiguousarray(f, dtype=np.complex128)
    out = np.empty((p1 * q1, p2 * q2), dtype=np.complex128)
    cdef double complex[:, ::1] dst = out
    cdef Py_ssize_t ar, ac, br, bc
    with nogil:
        for ar in range(p1):
            for ac in range(q1):
                for br in range(p2):
                    for bc in range(q2):
                        dst[ar * q1 + ac, br * q2 + bc] = src[ar * p2 + br, ac * q2 + bc]
    return out


def unrealign(m, Py_ssize_t p1, Py_ssize_t q1, Py_ssize_t p2, Py_ssize_t q2):
    cdef double complex[:, ::1] src = np.ascontiguousarray(m, dtype=np.complex128)
    out = np.empty((p1 * p2, q1 * q2), dtype=np.complex128)
    cdef double complex[:, ::1] dst = out
    cdef Py_ssize_t ar, ac, br, bc
    with nogil:
        for ar in range(p1):
            for ac in range(q1):
                for br in range(p2):
                    for bc in range(q2):
                        dst[ar * p2 + br, ac * q2 + bc] = src[ar * q1 + ac, br * q2 + bc]
    return out


def rho_closed(long n1, long n2):
    cdef long n = n1 * n2
    cdef long d = n2 * n2
    out = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] dst = out
    cdef double scale = <double>n1 / <double>n2
    cdef double theta
    cdef long l, m, l1, l2, m1, m2
    with nogil:
        for l in range(d):
            l1 = l // n2
            l2 = l % n2
            for m in range(d):
                m1 = m // n2
                m2 = m % n2
                if pmod(l1 - m1, n1) != 0 or pmod(l2 - m2, n1) != 0:
                    continue
                theta = 2.0 * M_PI * <double>pmod((l1 * l2) % n - (m1 * m2) % n, n) / <double>n
                dst[l, m] = scale * (cos(theta) + 1j * sin(theta))
    return out


def lattice_mismatches(long n1, long n2, overlap):
    cdef long[:, ::1] ov = np.ascontiguousarray(overlap, dtype=np.int64)
    cdef long d = n2 * n2
    cdef long l, m, inside, count = 0
    with nogil:
        for l in range(d):
            for m in range(d):
                inside = pmod(l // n2 - m // n2, n1) == 0 and pmod(l % n2 - m % n2, n1) == 0
                if inside != ov[l, m]:
                    count += 1
    return count


def weighted_kron_sum(coeffs, lefts, rights):
    cdef double[::1] w = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double complex[:, :, ::1] A = np.ascontiguousarray(lefts, dtype=np.complex128)
    cdef double complex[:, :, ::1] B = np.ascontiguousarray(rights, dtype=np.complex128)
    cdef Py_ssize_t K = A.shape[0], a = A.shape[1], b = A.shape[2]
    cdef Py_ssize_t c = B.shape[1], d = B.shape[2]
    out = np.zeros((a * c, b * d), dtype=np.complex128)
    cdef double complex[:, ::1] dst = out
    cdef Py_ssize_t k, i, j, r, s
    cdef double complex x
    with nogil:
        for k in range(K):
            for i in range(a):
                for j in range(b):
                    x = w[k] * A[k, i, j]
                    if x == 0:
                        continue
                    for r in range(c):
                        for s in range(d):
                            dst[i * c + r, j * d + s] += x * B[k, r, s]
    return out
