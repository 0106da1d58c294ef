"""Backend selection for the index kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise
the numpy fallback in ``_kernels_py`` is used.  Setting the environment
variable ``QFTSCHMIDT_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("QFTSCHMIDT_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

realign = _impl.realign
unrealign = _impl.unrealign
rho_closed = _impl.rho_closed
lattice_mismatches = _impl.lattice_mismatches
weighted_kron_sum = _impl.weighted_kron_sum

__all__ = [
    "BACKEND",
    "BACKENDS",
    "realign",
    "unrealign",
    "rho_closed",
    "lattice_mismatches",
    "weighted_kron_sum",
]
