"""Signed permutation sums weighted by prefix sets.

For a weight ``f`` on the nonempty subsets of ``N = {1..n}``,
``g(T)`` sums ``sign(sigma) * prod_i f({t_sigma(1), ..., t_sigma(i)})`` over
all orderings of ``T``.  Three evaluators are provided: permutation
enumeration (:mod:`~signsum.brute`), the subset recursion
(:mod:`~signsum.dp`) and an exterior-algebra pipeline
(:mod:`~signsum.wedge`).
"""

__version__ = "0.1.0"

from ._backend import backend_name, set_backend, use_backend
from .brute import epsilon_sum_brute, g_brute
from .core import (
    DomainError,
    FunctionWeight,
    Permutation,
    SizeError,
    SubsetMask,
    ValueClass,
    WeightFileError,
    WeightFunction,
    WeightTable,
    insertion_sign,
    mask_of,
    perm_sign,
    weight_table_random,
)
from .dp import GTable, bound_check, g_table, g_top
from .fermion import PrefixProblem, epsilon_sum, fermion_weight, proposition_check
from .search import BoundBreach, exhaustive_max, local_search_max
from .wedge import GradedVector, apply_P, apply_R, apply_R_adjoint, g_operator, gram_inner, inner_product, wedge_basis

__all__ = [
    "BoundBreach",
    "DomainError",
    "FunctionWeight",
    "GTable",
    "GradedVector",
    "Permutation",
    "PrefixProblem",
    "SizeError",
    "SubsetMask",
    "ValueClass",
    "WeightFileError",
    "WeightFunction",
    "WeightTable",
    "apply_P",
    "apply_R",
    "apply_R_adjoint",
    "backend_name",
    "bound_check",
    "epsilon_sum",
    "epsilon_sum_brute",
    "exhaustive_max",
    "fermion_weight",
    "g_brute",
    "g_operator",
    "g_table",
    "g_top",
    "gram_inner",
    "inner_product",
    "insertion_sign",
    "local_search_max",
    "mask_of",
    "perm_sign",
    "proposition_check",
    "set_backend",
    "use_backend",
    "wedge_basis",
    "weight_table_random",
]
