"""Interaction indexes of functions on the unit cube [0,1]^n."""

from .continuous import (
    EstimatorKind,
    IntegratorConfig,
    Method,
    best_k_approx,
    dual,
    estimate,
    interaction,
    interaction_table,
    self_dual_split,
)
from .discrete import banzhaf_interaction, banzhaf_table, best_k_approx_discrete, mobius, zeta
from .errors import (
    DegenerateError,
    DomainError,
    EvaluationError,
    InteractError,
    InvalidArgument,
    SpecParseError,
    Unsupported,
)
from .io import load_spec, spec_from_dict
from .model import (
    Affine,
    BlackBox,
    Choquet,
    Estimate,
    GeometricMean,
    Identity,
    InteractionTable,
    LinearCombination,
    Multilinear,
    MultilinearPoly,
    Multiplicative,
    Power,
    PseudoMultilinear,
    SetFunction,
    Tabulated,
    evaluate,
    permute,
)
from .stats import fit_report, moments, normalized_index, r_squared

__version__ = "0.1.0"
