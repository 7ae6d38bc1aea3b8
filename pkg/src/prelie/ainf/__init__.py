"""Homotopy-associative structures: convolution algebra and homotopy transfer."""

from .convolution import (
    DEFAULT_TRUNCATION_ARITY,
    ConvElement,
    MCReport,
    MultiOp,
    circle,
    circle_inverse,
    compose_at,
    element_from_map,
    gauge_act,
    inf_morphism_check,
    mc_check,
    star,
    unit_element,
)
from .jsonio import (
    contraction_from_dict,
    contraction_to_dict,
    element_from_dict,
    element_to_dict,
    multiop_from_dict,
    multiop_to_dict,
)
from .transfer import (
    Contraction,
    TensorOperator,
    TransferResult,
    TrivializerResult,
    alpha_check,
    alpha_hat,
    binomial_identities_check,
    find_trivializer,
    h_push,
    h_star,
    is_gauge_trivial,
    phi_kernel,
    phi_kernel_by_inverse,
    phi_kernel_by_trees,
    psi_kernel,
    sym_homotopy,
    tech_r_check,
    tensor_from_factors,
    tensor_identity,
    transfer,
)

__all__ = [
    "DEFAULT_TRUNCATION_ARITY",
    "ConvElement",
    "Contraction",
    "MCReport",
    "MultiOp",
    "TensorOperator",
    "TransferResult",
    "TrivializerResult",
    "alpha_check",
    "alpha_hat",
    "binomial_identities_check",
    "circle",
    "circle_inverse",
    "compose_at",
    "contraction_from_dict",
    "contraction_to_dict",
    "element_from_dict",
    "element_from_map",
    "element_to_dict",
    "find_trivializer",
    "gauge_act",
    "h_push",
    "h_star",
    "inf_morphism_check",
    "is_gauge_trivial",
    "mc_check",
    "multiop_from_dict",
    "multiop_to_dict",
    "phi_kernel",
    "phi_kernel_by_inverse",
    "phi_kernel_by_trees",
    "psi_kernel",
    "star",
    "sym_homotopy",
    "tech_r_check",
    "tensor_from_factors",
    "tensor_identity",
    "transfer",
    "unit_element",
]
