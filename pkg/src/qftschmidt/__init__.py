"""Operator-Schmidt decompositions of bipartite operators and of the QFT."""
from .engine import (
    SchmidtDecomposition,
    SchmidtTerm,
    SingularTriple,
    decompose_general,
    left_factors_from_right,
    realign,
    realign_general,
    reduced_density,
    schmidt_decompose,
    svd,
    unrealign,
)
from .errors import (
    ContractError,
    DimensionError,
    DomainError,
    IndexRangeError,
    NumericalError,
    QftSchmidtError,
)
from .kernels import BACKEND
from .linalg import (
    BipartiteDims,
    dagger,
    digit_swap,
    frobenius_norm,
    hs_inner,
    matrix_from_json,
    matrix_to_json,
    mixed_decimal_decode,
    mixed_decimal_encode,
    tensor_product,
)
from .qft import (
    EquivalenceClass,
    SpectrumTable,
    a_matrix,
    b_matrix,
    chi_identity_check,
    closed_form_decomposition,
    enumerate_classes,
    qft_bipartite,
    qft_matrix,
    rho_closed_form,
    spectrum_by_cases,
)
from .strength import (
    QuditSchedule,
    StrengthReport,
    communication_operator,
    communication_operator_decomposition,
    communication_operator_numeric,
    hartley_strength,
    schedule_satisfies_bound,
    schmidt_strength,
    strength_report,
)

__version__ = "0.1.0"
