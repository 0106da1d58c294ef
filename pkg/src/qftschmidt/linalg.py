"""Dense complex matrix helpers and bipartite index conventions.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
composite space C^n = C^n1 (x) C^n2 is flattened with the mixed-decimal
rule ``s = k * n2 + l`` (first factor is the most significant digit), which
is also the convention of :func:`numpy.kron`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimensionError, DomainError, IndexRangeError


@dataclass(frozen=True)
class BipartiteDims:
    """Local dimensions ``(n1, n2)`` of a bipartite space, ``n = n1 * n2``."""

    n1: int
    n2: int
    n: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ("n1", "n2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise DomainError(f"{name} must be >= 2, got {value}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "n", self.n1 * self.n2)

    def swapped(self) -> "BipartiteDims":
        return BipartiteDims(self.n2, self.n1)

    def to_json(self) -> dict[str, int]:
        return {"n1": self.n1, "n2": self.n2}


def as_matrix(a: Any) -> np.ndarray:
    """Coerce ``a`` to a 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def tensor_product(a: Any, b: Any) -> np.ndarray:
    """Kronecker product; entry ``(ra*b.rows + rb, ca*b.cols + cb)`` is ``a[ra,ca]*b[rb,cb]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a: Any) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def hs_inner(a: Any, b: Any) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^dagger b)``, conjugate-linear in ``a``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    # Tr(a^dagger b) = sum_ij conj(a_ij) b_ij, no product matrix needed
    return complex(np.vdot(a, b))


def frobenius_norm(a: Any) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def mixed_decimal_encode(k: int, l: int, dims: BipartiteDims) -> int:
    """Flat index ``k * n2 + l`` of the basis vector ``|k> (x) |l>``."""
    if not 0 <= k < dims.n1:
        raise IndexRangeError(f"k={k} outside [0, {dims.n1})")
    if not 0 <= l < dims.n2:
        raise IndexRangeError(f"l={l} outside [0, {dims.n2})")
    return k * dims.n2 + l


def mixed_decimal_decode(s: int, dims: BipartiteDims) -> tuple[int, int]:
    if not 0 <= s < dims.n:
        raise IndexRangeError(f"s={s} outside [0, {dims.n})")
    return divmod(s, dims.n2)


def digit_swap(dims: BipartiteDims) -> np.ndarray:
    """Permutation ``R`` with ``R |k*n2 + l> = |l*n1 + k>``."""
    r = np.zeros((dims.n, dims.n), dtype=np.complex128)
    k, l = np.divmod(np.arange(dims.n), dims.n2)
    r[l * dims.n1 + k, k * dims.n2 + l] = 1.0
    return r


def is_unitary(a: Any, atol: float = 1e-10) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.allclose(a.conj().T @ a, np.eye(a.shape[0]), atol=atol, rtol=0.0))


def matrix_to_json(a: Any) -> dict[str, Any]:
    """Serialize to ``{"rows", "cols", "data": [[re, im], ...]}`` (row-major)."""
    a = as_matrix(a)
    flat = a.ravel()
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj: Any) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; raises ``DomainError`` on malformed input."""
    if not isinstance(obj, dict):
        raise DomainError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise DomainError(f"matrix JSON missing key {exc}") from None
    if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (rows, cols)):
        raise DomainError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise DomainError(f"data must be a list of length rows*cols = {rows * cols}")
    try:
        pairs = np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise DomainError("data entries must be [re, im] number pairs") from None
    if pairs.shape != (rows * cols, 2):
        raise DomainError("data entries must be [re, im] number pairs")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(rows, cols)
