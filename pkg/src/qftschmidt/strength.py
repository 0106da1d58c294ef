"""Nonlocality strength measures and communication-cost bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .engine import SchmidtDecomposition, SchmidtTerm, decompose_general
from .errors import DomainError

NORMALIZATION_RTOL = 1e-6
BOUND_SLACK = 1e-12


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class StrengthReport:
    schmidt_number: int
    hartley: float
    schmidt_strength: float
    q0_lower: float
    q0_lower_original: float
    q0_upper: float | None

    def to_json(self) -> dict[str, Any]:
        return {
            "schmidt_number": self.schmidt_number,
            "hartley": self.hartley,
            "schmidt_strength": self.schmidt_strength,
            "q0_lower": self.q0_lower,
            "q0_lower_original": self.q0_lower_original,
            "q0_upper": self.q0_upper,
        }


@dataclass(frozen=True)
class QuditSchedule:
    """Number of qudits of each dimension ``d >= 2`` sent between the parties."""

    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for d, n in self.counts.items():
            if d < 2:
                raise DomainError(f"qudit dimension must be >= 2, got {d}")
            if n < 0:
                raise DomainError(f"qudit count must be >= 0, got {n} for d={d}")

    def capacity_bits(self) -> float:
        return sum(n * math.log2(d) for d, n in self.counts.items())


def hartley_strength(d: SchmidtDecomposition) -> float:
    """``log2`` of the Schmidt number."""
    if d.schmidt_number == 0:
        raise DomainError("empty decomposition has no Hartley strength")
    return math.log2(d.schmidt_number)


def schmidt_strength(d: SchmidtDecomposition) -> float:
    """Shannon entropy (bits) of ``lambda_k**2 / (n1*n2)``; unitary sources only."""
    if d.schmidt_number == 0:
        raise DomainError("empty decomposition has no Schmidt strength")
    n = d.dims.n
    p = d.coefficients**2 / n
    total = p.sum()
    if abs(total - 1.0) > NORMALIZATION_RTOL:
        raise DomainError(
            f"sum of squared coefficients is {total * n:.12g}, expected {n} "
            f"(deficit {n - total * n:.3g}); operator is not unitary"
        )
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def strength_report(d: SchmidtDecomposition) -> StrengthReport:
    hartley = hartley_strength(d)
    n1, n2 = d.dims.n1, d.dims.n2
    upper = None
    if _is_power_of_two(n1) and _is_power_of_two(n2):
        upper = 2.0 * min(math.log2(n1), math.log2(n2))
    return StrengthReport(
        schmidt_number=d.schmidt_number,
        hartley=hartley,
        schmidt_strength=schmidt_strength(d),
        q0_lower=hartley,
        q0_lower_original=hartley / 2.0,
        q0_upper=upper,
    )


def schedule_satisfies_bound(s: QuditSchedule, d: SchmidtDecomposition) -> bool:
    return s.capacity_bits() >= hartley_strength(d) - BOUND_SLACK


def _check_comm_dims(n1: int, n2: int, n3: int) -> None:
    for name, v in (("n1", n1), ("n2", n2), ("n3", n3)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 2:
            raise DomainError(f"{name} must be an integer >= 2, got {v!r}")


def communication_operator(n1: int, n2: int, n3: int) -> np.ndarray:
    """Re-association ``(a (x) b) (x) c -> a (x) (b (x) c)``; the identity on flat indices.

    Input split is ``(n1*n2) | n3`` and output split ``n1 | (n2*n3)``.
    """
    _check_comm_dims(n1, n2, n3)
    return np.eye(n1 * n2 * n3, dtype=np.complex128)


def communication_shapes(n1: int, n2: int, n3: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """``(left_shape, right_shape)`` as ``(out, in)`` pairs for the re-association split."""
    return (n1, n1 * n2), (n2 * n3, n3)


def communication_operator_decomposition(n1: int, n2: int, n3: int) -> list[SchmidtTerm]:
    """Explicit ``n2``-term decomposition, every coefficient ``sqrt(n1*n3)``.

    ``A_k = n1**-0.5 sum_i |i><i k|`` maps C^(n1 n2) -> C^n1 and
    ``B_k = n3**-0.5 sum_i |k i><i|`` maps C^n3 -> C^(n2 n3).
    """
    _check_comm_dims(n1, n2, n3)
    coeff = math.sqrt(n1 * n3)
    terms = []
    for k in range(n2):
        a = np.zeros((n1, n1 * n2), dtype=np.complex128)
        a[np.arange(n1), np.arange(n1) * n2 + k] = 1.0 / math.sqrt(n1)
        b = np.zeros((n2 * n3, n3), dtype=np.complex128)
        b[k * n3 + np.arange(n3), np.arange(n3)] = 1.0 / math.sqrt(n3)
        terms.append(SchmidtTerm(coeff, a, b))
    return terms


def communication_operator_numeric(
    n1: int, n2: int, n3: int, rel_tol: float = 1e-9
) -> list[SchmidtTerm]:
    """Same decomposition obtained by rectangular realignment + SVD."""
    left, right = communication_shapes(n1, n2, n3)
    return decompose_general(communication_operator(n1, n2, n3), left, right, rel_tol)
