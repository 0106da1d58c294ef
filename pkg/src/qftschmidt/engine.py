"""Numerical operator-Schmidt decomposition by realignment and SVD.

An operator ``f`` on C^n1 (x) C^n2 is rearranged into an ``n1**2 x n2**2``
matrix ``M`` with ``M[j1*n1 + j2, l1*n2 + l2] = f[j1*n2 + l1, j2*n2 + l2]``.
If ``M = U diag(s) V^dagger`` then ``f = sum_k s_k A_k (x) B_k`` with
``A_k = U[:, k]`` and ``B_k = conj(V[:, k])`` unflattened row-major.  The
conjugate on the right factor is what makes the reconstruction identity hold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import ContractError, DimensionError, DomainError, NumericalError
from .linalg import BipartiteDims, as_matrix, matrix_from_json, matrix_to_json

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtTerm:
    coefficient: float
    left: np.ndarray
    right: np.ndarray

    def __iter__(self) -> Iterator[Any]:
        return iter((self.coefficient, self.left, self.right))


@dataclass(frozen=True)
class SingularTriple:
    """Thin SVD ``m = left_vectors @ diag(singular_values) @ right_vectors^dagger``."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Ordered terms ``(lambda_k, A_k, B_k)`` with ``lambda_k`` descending."""

    dims: BipartiteDims
    terms: tuple[SchmidtTerm, ...]

    @property
    def schmidt_number(self) -> int:
        return len(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms], dtype=np.float64)

    @property
    def lefts(self) -> list[np.ndarray]:
        return [t.left for t in self.terms]

    @property
    def rights(self) -> list[np.ndarray]:
        return [t.right for t in self.terms]

    def reconstruct(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((self.dims.n, self.dims.n), dtype=np.complex128)
        return kernels.weighted_kron_sum(
            self.coefficients, np.stack(self.lefts), np.stack(self.rights)
        )

    def is_completely_degenerate(self, rel_tol: float = 1e-9) -> bool:
        """Maximal term count ``min(n1, n2)**2`` and all coefficients equal."""
        if self.schmidt_number != min(self.dims.n1, self.dims.n2) ** 2:
            return False
        c = self.coefficients
        return bool(np.ptp(c) <= rel_tol * c.max())

    def groups(self, rel_tol: float = 1e-9) -> list[tuple[float, list[SchmidtTerm]]]:
        """Terms grouped by (numerically) equal coefficient, in order."""
        out: list[tuple[float, list[SchmidtTerm]]] = []
        for term in self.terms:
            if out and abs(out[-1][0] - term.coefficient) <= rel_tol * out[0][0]:
                out[-1][1].append(term)
            else:
                out.append((term.coefficient, [term]))
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "dims": self.dims.to_json(),
            "terms": [
                {"lambda": float(t.coefficient), "A": matrix_to_json(t.left), "B": matrix_to_json(t.right)}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "SchmidtDecomposition":
        try:
            dims = BipartiteDims(obj["dims"]["n1"], obj["dims"]["n2"])
            terms = tuple(
                SchmidtTerm(float(t["lambda"]), matrix_from_json(t["A"]), matrix_from_json(t["B"]))
                for t in obj["terms"]
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed decomposition JSON: {exc!r}") from None
        return cls(dims, terms)


def _check_square(f: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    f = as_matrix(f)
    if f.shape != (dims.n, dims.n):
        raise DimensionError(f"operator shape {f.shape} does not match {dims.n}x{dims.n}")
    return f


def realign(f: Any, dims: BipartiteDims) -> np.ndarray:
    """Realignment of a square bipartite operator, shape ``(n1**2, n2**2)``."""
    f = _check_square(f, dims)
    return kernels.realign(f, dims.n1, dims.n1, dims.n2, dims.n2)


def unrealign(m: Any, dims: BipartiteDims) -> np.ndarray:
    m = as_matrix(m)
    if m.shape != (dims.n1**2, dims.n2**2):
        raise DimensionError(f"realigned shape {m.shape} does not match {(dims.n1**2, dims.n2**2)}")
    return kernels.unrealign(m, dims.n1, dims.n1, dims.n2, dims.n2)


def realign_general(
    f: Any, left_shape: tuple[int, int], right_shape: tuple[int, int]
) -> np.ndarray:
    """Realignment for ``f: H (x) K -> H' (x) K'``.

    ``left_shape = (dim H', dim H)`` and ``right_shape = (dim K', dim K)``.
    Rows of the result are indexed by (output-left, input-left), columns by
    (output-right, input-right).
    """
    (p1, q1), (p2, q2) = left_shape, right_shape
    f = as_matrix(f)
    if f.shape != (p1 * p2, q1 * q2):
        raise DimensionError(f"operator shape {f.shape} does not match {(p1 * p2, q1 * q2)}")
    return kernels.realign(f, p1, q1, p2, q2)


def svd(m: Any) -> SingularTriple:
    m = as_matrix(m)
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix contains non-finite entries")
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return SingularTriple(s, u, vh.conj().T)


def _terms_from_realigned(
    m: np.ndarray, left_shape: tuple[int, int], right_shape: tuple[int, int], rel_tol: float
) -> list[SchmidtTerm]:
    if not 0.0 < rel_tol < 1.0:
        raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    triple = svd(m)
    s = triple.singular_values
    if s.size == 0 or s[0] == 0.0:
        raise DomainError("cannot decompose the zero operator")
    keep = int(np.count_nonzero(s > rel_tol * s[0]))
    terms = []
    for k in range(keep):
        u = triple.left_vectors[:, k]
        v_conj = triple.right_vectors[:, k].conj()
        # largest-magnitude entry of the left vector made real positive
        pivot = u[np.argmax(np.abs(u))]
        phase = pivot / abs(pivot)
        u = u / phase
        v_conj = v_conj * phase
        terms.append(SchmidtTerm(float(s[k]), u.reshape(left_shape), v_conj.reshape(right_shape)))
    return terms


def decompose_general(
    f: Any,
    left_shape: tuple[int, int],
    right_shape: tuple[int, int],
    rel_tol: float = DEFAULT_REL_TOL,
) -> list[SchmidtTerm]:
    """Schmidt terms of ``f: H (x) K -> H' (x) K'`` (see :func:`realign_general`)."""
    m = realign_general(f, left_shape, right_shape)
    return _terms_from_realigned(m, tuple(left_shape), tuple(right_shape), rel_tol)


def schmidt_decompose(
    f: Any, dims: BipartiteDims, rel_tol: float = DEFAULT_REL_TOL
) -> SchmidtDecomposition:
    """Operator-Schmidt decomposition via realignment + SVD.

    Singular values ``s_k <= rel_tol * s_max`` are treated as zero.  Within a
    degenerate block the factor basis is whatever LAPACK returns; only the
    spanned subspaces are meaningful there.
    """
    m = realign(f, dims)
    terms = _terms_from_realigned(m, (dims.n1, dims.n1), (dims.n2, dims.n2), rel_tol)
    return SchmidtDecomposition(dims, tuple(terms))


def reduced_density(f: Any, dims: BipartiteDims) -> np.ndarray:
    """Reduced density superoperator on ``B(C^n2)``, shape ``(n2**2, n2**2)``.

    ``rho[l, m] = sum_j M[j, l] * conj(M[j, m])`` with ``M = realign(f)``,
    i.e. ``rho = M^T conj(M)``; its eigenvectors are the flattened right factors.
    """
    m = realign(f, dims)
    return m.T @ m.conj()


def left_factors_from_right(
    f: Any,
    dims: BipartiteDims,
    rights: Sequence[Any],
    mus: Sequence[float],
    atol: float = 1e-10,
) -> list[np.ndarray]:
    """Recover the left factors paired with given right factors.

    ``rights`` must be HS-orthonormal eigenvectors of ``reduced_density(f)``
    with eigenvalues ``mus``.  Each left factor is
    ``A[j1, j2] = mu**-0.5 * sum_{l1,l2} f[j1*n2 + l1, j2*n2 + l2] * conj(B[l1, l2])``.
    """
    if len(rights) != len(mus):
        raise DimensionError(f"{len(rights)} right factors but {len(mus)} eigenvalues")
    mus = np.asarray(mus, dtype=np.float64)
    if np.any(mus <= 0):
        raise DomainError("all eigenvalues must be strictly positive")
    bs = np.stack([as_matrix(b) for b in rights]) if len(rights) else np.empty((0, dims.n2, dims.n2))
    if bs.shape[1:] != (dims.n2, dims.n2):
        raise DimensionError(f"right factors must be {dims.n2}x{dims.n2}")
    vecs = bs.reshape(len(bs), -1)
    gram = vecs.conj() @ vecs.T
    if not np.allclose(gram, np.eye(len(bs)), atol=atol, rtol=0.0):
        raise ContractError("right factors are not Hilbert-Schmidt orthonormal")

    m = realign(f, dims)
    lefts_flat = (m @ vecs.conj().T) / np.sqrt(mus)
    lefts = [lefts_flat[:, k].reshape(dims.n1, dims.n1) for k in range(len(bs))]

    gram_a = lefts_flat.conj().T @ lefts_flat
    if not np.allclose(gram_a, np.eye(len(bs)), atol=max(atol, 1e-8), rtol=0.0):
        raise ContractError("recovered left factors are not orthonormal; rights/mus are not eigenpairs")
    return lefts
