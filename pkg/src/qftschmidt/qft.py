"""Closed-form operator-Schmidt decomposition of the bipartite QFT.

Pairs in ``Z_n2 x Z_n2`` are grouped by translation through ``n1 * Z^2``
(plain integer subtraction, no wrap-around).  Every class ``C`` contributes
one term ``sqrt((n1/n2) |C|) * A_C (x) B_C`` to the QFT on C^n1 (x) C^n2.

All phases are evaluated as ``exp(2*pi*i * r / q)`` with the integer ``r``
reduced modulo ``q`` first, so large arguments lose no precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import kernels
from .engine import SchmidtDecomposition, SchmidtTerm
from .errors import DomainError
from .linalg import BipartiteDims

CASE_DIVIDES = "divides"
CASE_N1_GE_N2 = "n1_ge_n2"
CASE_GENERAL = "general"


def _root_of_unity(r: Any, q: int) -> np.ndarray:
    return np.exp(2j * np.pi * (np.asarray(r, dtype=np.int64) % q) / q)


def qft_matrix(n: int) -> np.ndarray:
    """``F[t, s] = exp(2*pi*i*t*s/n) / sqrt(n)``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"QFT size must be an integer >= 2, got {n!r}")
    t = np.arange(n, dtype=np.int64)
    return _root_of_unity(np.outer(t, t), n) / np.sqrt(n)


def qft_bipartite(dims: BipartiteDims) -> np.ndarray:
    """The QFT on C^N viewed as an operator on C^n1 (x) C^n2 (mixed-decimal flattening)."""
    return qft_matrix(dims.n)


@dataclass(frozen=True)
class EquivalenceClass:
    rep: tuple[int, int]
    members: frozenset[tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, pair: object) -> bool:
        return pair in self.members

    def sorted_members(self) -> list[tuple[int, int]]:
        return sorted(self.members)

    def to_json(self) -> dict[str, Any]:
        return {"rep": list(self.rep), "members": [list(p) for p in self.sorted_members()]}


def canonical_rep(pair: tuple[int, int], dims: BipartiteDims) -> tuple[int, int]:
    """Class representative: both coordinates reduced below ``n1``.

    When ``n1 > n2`` every pair already satisfies this and is its own class.
    """
    return (pair[0] % dims.n1, pair[1] % dims.n1)


def class_size(rep: tuple[int, int], dims: BipartiteDims) -> int:
    n1, n2 = dims.n1, dims.n2
    if n1 > n2:
        return 1
    c1, c2 = rep
    return (-(-(n2 - c1) // n1)) * (-(-(n2 - c2) // n1))


def enumerate_classes(dims: BipartiteDims) -> list[EquivalenceClass]:
    """All ``min(n1, n2)**2`` classes, ordered lexicographically by representative."""
    n1, n2 = dims.n1, dims.n2
    m = min(n1, n2)
    classes = []
    for c1 in range(m):
        for c2 in range(m):
            members = frozenset(
                (a, b) for a in range(c1, n2, n1) for b in range(c2, n2, n1)
            )
            classes.append(EquivalenceClass((c1, c2), members))
    return classes


def classes_to_json(dims: BipartiteDims, classes: list[EquivalenceClass]) -> dict[str, Any]:
    return {"n1": dims.n1, "n2": dims.n2, "classes": [c.to_json() for c in classes]}


def a_matrix(
    c: EquivalenceClass, dims: BipartiteDims, rep: tuple[int, int] | None = None
) -> np.ndarray:
    """``A_C[k1, k2] = exp(2*pi*i/n1 * (n2*k1*k2 + k1*c2 + k2*c1)) / n1``.

    ``rep`` may be any member of the class; the result does not depend on it.
    """
    c1, c2 = c.rep if rep is None else rep
    k = np.arange(dims.n1, dtype=np.int64)
    r = dims.n2 * np.outer(k, k) + k[:, None] * c2 + k[None, :] * c1
    return _root_of_unity(r, dims.n1) / dims.n1


def b_matrix(c: EquivalenceClass, dims: BipartiteDims) -> np.ndarray:
    """``B_C[l1, l2] = exp(2*pi*i*l1*l2/N) / sqrt(|C|)`` on the class support, zero elsewhere."""
    out = np.zeros((dims.n2, dims.n2), dtype=np.complex128)
    idx = np.array(c.sorted_members(), dtype=np.int64)
    out[idx[:, 0], idx[:, 1]] = _root_of_unity(idx[:, 0] * idx[:, 1], dims.n) / np.sqrt(c.size)
    return out


def closed_form_coefficient(c: EquivalenceClass, dims: BipartiteDims) -> float:
    return float(np.sqrt(dims.n1 * c.size / dims.n2))


def closed_form_decomposition(dims: BipartiteDims) -> SchmidtDecomposition:
    classes = enumerate_classes(dims)
    terms = [
        SchmidtTerm(closed_form_coefficient(c, dims), a_matrix(c, dims), b_matrix(c, dims))
        for c in classes
    ]
    # stable: ties keep lexicographic representative order
    terms.sort(key=lambda t: -t.coefficient)
    return SchmidtDecomposition(dims, tuple(terms))


@dataclass(frozen=True)
class SpectrumTable:
    case_label: str
    entries: tuple[tuple[float, int], ...]

    @property
    def schmidt_number(self) -> int:
        return sum(m for _, m in self.entries)

    def expand(self) -> np.ndarray:
        """Coefficients repeated by multiplicity, descending."""
        return np.concatenate([np.full(m, c) for c, m in self.entries])

    def to_json(self) -> dict[str, Any]:
        return {
            "case": self.case_label,
            "entries": [{"coefficient": c, "multiplicity": m} for c, m in self.entries],
        }


def spectrum_by_cases(dims: BipartiteDims) -> SpectrumTable:
    """Distinct Schmidt coefficients of the bipartite QFT and their multiplicities."""
    n1, n2 = dims.n1, dims.n2
    if n2 % n1 == 0:
        return SpectrumTable(CASE_DIVIDES, ((float(np.sqrt(n2 / n1)), n1 * n1),))
    if n1 >= n2:
        return SpectrumTable(CASE_N1_GE_N2, ((float(np.sqrt(n1 / n2)), n2 * n2),))
    lo = n2 // n1
    hi = lo + 1
    r = n2 % n1
    s = (-n2) % n1
    ratio = n1 / n2
    entries = (
        (float(np.sqrt(hi * hi * ratio)), r * r),
        (float(np.sqrt(hi * lo * ratio)), 2 * r * s),
        (float(np.sqrt(lo * lo * ratio)), s * s),
    )
    return SpectrumTable(CASE_GENERAL, entries)


def rho_closed_form(dims: BipartiteDims) -> np.ndarray:
    """``rho[l, m] = (n1/n2) exp(2*pi*i/N (l1*l2 - m1*m2)) [l - m in n1 Z^2]``."""
    return kernels.rho_closed(dims.n1, dims.n2)


def chi_identity_check(dims: BipartiteDims) -> bool:
    """Check ``[l - m in n1 Z^2] == sum_C [l in C][m in C]`` for every pair ``(l, m)``."""
    n2 = dims.n2
    classes = enumerate_classes(dims)
    indicator = np.zeros((len(classes), n2 * n2), dtype=np.int64)
    for i, c in enumerate(classes):
        for a, b in c.members:
            indicator[i, a * n2 + b] = 1
    overlap = indicator.T @ indicator
    return kernels.lattice_mismatches(dims.n1, dims.n2, overlap) == 0
