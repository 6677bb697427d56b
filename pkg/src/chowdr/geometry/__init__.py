from .family import Albanese, FamilyModel, UniversalBundle, validate_family
from .morphism import (
    Morphism,
    compose,
    identity,
    pullback,
    pushforward,
    register_morphism,
    validate_morphism,
)
from .products import tensor_power, tensor_product, truncated_polynomial_ring

__all__ = [
    "Albanese",
    "FamilyModel",
    "Morphism",
    "UniversalBundle",
    "compose",
    "identity",
    "pullback",
    "pushforward",
    "register_morphism",
    "tensor_power",
    "tensor_product",
    "truncated_polynomial_ring",
    "validate_family",
    "validate_morphism",
]
