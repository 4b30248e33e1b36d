"""How far a joint state is from the product of its marginals."""
from __future__ import annotations

import numpy as np

from .dist import Dist, product_of_marginals, tvd
from .quantum import DensityMatrix, kron, partial_trace, trd


def classical_entwinedness(omega: Dist) -> float:
    """``tvd(omega, omega_1 (x) omega_2)`` for a distribution over pair labels."""
    return tvd(omega, product_of_marginals(omega))


def product_of_reductions(rho, dims: tuple[int, int]) -> np.ndarray:
    data = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return kron(partial_trace(data, dims, "first"), partial_trace(data, dims, "second"))


def quantum_entwinedness(rho, dims: tuple[int, int]) -> float:
    """``trd(rho, rho_1 (x) rho_2)`` for a state on ``C^d1 (x) C^d2``."""
    data = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return trd(data, product_of_reductions(data, dims))
