"""Both kernel backends against loop oracles and against each other."""
import itertools

import numpy as np
import pytest

from conftest import random_complex
from qftschmidt import _kernels_py, kernels


def realign_loop(f, p1, q1, p2, q2):
    out = np.empty((p1 * q1, p2 * q2), dtype=complex)
    for ar, ac, br, bc in itertools.product(range(p1), range(q1), range(p2), range(q2)):
        out[ar * q1 + ac, br * q2 + bc] = f[ar * p2 + br, ac * q2 + bc]
    return out


def rho_loop(n1, n2):
    """Reduced density from the un-simplified double sum over j1, j2."""
    n = n1 * n2
    rho = np.zeros((n2 * n2, n2 * n2), dtype=complex)
    for l1, l2, m1, m2 in itertools.product(range(n2), repeat=4):
        acc = 0j
        for j1, j2 in itertools.product(range(n1), repeat=2):
            acc += np.exp(2j * np.pi * (n2 * j1 + l1) * (n2 * j2 + l2) / n) * np.exp(
                -2j * np.pi * (n2 * j1 + m1) * (n2 * j2 + m2) / n
            )
        rho[l1 * n2 + l2, m1 * n2 + m2] = acc / n
    return rho


def test_backend_selected():
    assert kernels.BACKEND in kernels.BACKENDS
    assert "python" in kernels.BACKENDS


@pytest.mark.parametrize("shape", [(2, 2, 3, 3), (2, 3, 4, 1), (1, 5, 2, 2), (3, 6, 2, 4)])
def test_realign_matches_loop(backend, rng, shape):
    p1, q1, p2, q2 = shape
    f = random_complex(rng, p1 * p2, q1 * q2)
    m = backend.realign(f, *shape)
    np.testing.assert_array_equal(m, realign_loop(f, *shape))
    np.testing.assert_array_equal(backend.unrealign(m, *shape), f)


@pytest.mark.parametrize("n1,n2", [(2, 2), (2, 3), (3, 2), (3, 5), (4, 6)])
def test_rho_closed_matches_double_sum(backend, n1, n2):
    np.testing.assert_allclose(backend.rho_closed(n1, n2), rho_loop(n1, n2), atol=1e-12)


def test_lattice_mismatches(backend):
    n1, n2 = 2, 3
    pts = list(itertools.product(range(n2), repeat=2))
    truth = np.array(
        [[int((a - c) % n1 == 0 and (b - d) % n1 == 0) for c, d in pts] for a, b in pts]
    )
    assert backend.lattice_mismatches(n1, n2, truth) == 0
    wrong = truth.copy()
    wrong[0, 1] ^= 1
    wrong[4, 4] ^= 1
    assert backend.lattice_mismatches(n1, n2, wrong) == 2


def test_weighted_kron_sum(backend, rng):
    k = 4
    coeffs = rng.random(k)
    lefts = random_complex(rng, k, 2, 3)
    rights = random_complex(rng, k, 3, 2)
    expected = sum(coeffs[i] * np.kron(lefts[i], rights[i]) for i in range(k))
    np.testing.assert_allclose(backend.weighted_kron_sum(coeffs, lefts, rights), expected, atol=1e-13)


@pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled extension not built")
@pytest.mark.parametrize("n1,n2", [(2, 7), (5, 3), (8, 12)])
def test_backends_agree(rng, n1, n2):
    c = kernels.BACKENDS["cython"]
    f = random_complex(rng, n1 * n2, n1 * n2)
    np.testing.assert_array_equal(c.realign(f, n1, n1, n2, n2), _kernels_py.realign(f, n1, n1, n2, n2))
    np.testing.assert_allclose(c.rho_closed(n1, n2), _kernels_py.rho_closed(n1, n2), atol=1e-14, rtol=0)
