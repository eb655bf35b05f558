"""Relative Davenport constants of finite abelian groups, and elasticity of orders built on them."""

from .elasticity import (
    INFINITE,
    Elasticity,
    OrderClassData,
    counterexample_condition,
    elasticity_of_order,
    elasticity_prime_conductor,
    elasticity_prime_nonprincipal,
    infinite_elasticity_guard,
    locally_associated_numeric_test,
    simpler_formula_if_dominant,
)
from .errors import (
    DomainError,
    GroupTooLargeError,
    InvalidArgumentError,
    InvalidGroupError,
    InvalidSubgroupError,
    InvariantViolation,
    PreconditionError,
    ReldavError,
    UnsupportedCaseError,
)
from .groups import FabGroup, Subgroup, cyclic, make_group, make_subgroup, quotient
from .zerosum import (
    SrdResult,
    check_conjecture_generator,
    check_conjecture_subgroup_difference,
    cyclic_small_rel_coset,
    davenport,
    rel_davenport,
    skalba_relative,
    small_rel_davenport,
)

__version__ = "0.1.0"
