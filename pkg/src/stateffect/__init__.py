"""Distances between probabilistic and quantum states and predicates."""
from .dist import (
    Dist,
    FuzzyPredicate,
    KleisliMap,
    dirac,
    dist_new,
    marginal,
    pred_transform,
    product_of_marginals,
    state_transform,
    tensor,
    tvd,
    tvd_witness,
    uniform,
    validity,
)
from .effects import FuzzyModel, MatrixEffectModel, UnitIntervalModel, ard, ominus, ovee
from .entwine import classical_entwinedness, quantum_entwinedness
from .errors import StateffectError
from .metric import FiniteMetricSpace, discrete_space, kantorovich, lipschitz_witness, metric_validate
from .quantum import DensityMatrix, Effect, herm_eig, mat_abs, trd, trd_witness, vld
from .transport import TransportProblem, solve_transport

__version__ = "0.1.0"

__all__ = [
    "Dist", "FuzzyPredicate", "KleisliMap", "dirac", "dist_new", "marginal", "pred_transform",
    "product_of_marginals", "state_transform", "tensor", "tvd", "tvd_witness", "uniform", "validity",
    "FuzzyModel", "MatrixEffectModel", "UnitIntervalModel", "ard", "ominus", "ovee",
    "classical_entwinedness", "quantum_entwinedness", "StateffectError",
    "FiniteMetricSpace", "discrete_space", "kantorovich", "lipschitz_witness", "metric_validate",
    "DensityMatrix", "Effect", "herm_eig", "mat_abs", "trd", "trd_witness", "vld",
    "TransportProblem", "solve_transport",
]
