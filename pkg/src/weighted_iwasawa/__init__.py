"""Weighted graphs in Z_p^d-towers: complexities, characteristic elements, Iwasawa invariants."""

from .charelem import CharElement, char_element_direct, char_element_sec5, eval_char_element
from .complexity import (
    ConsistencyError,
    character_matrix,
    h_value,
    kappa_matrix_tree,
    product_formula_kappa,
    three_term_check,
)
from .covers import Cover, cover_is_connected, derived_cover, enumerate_arborescences, tower_layer
from .cyclotomic import CyclotomicNumber, cyclo_norm, val_p_cyclotomic
from .graph import (
    Orientation,
    ValidationReport,
    VoltageAssignment,
    WeightedGraph,
    euler_characteristic,
    validate_graph,
    weighted_matrices,
)
from .groups import AbelianGroup, Character, FreeAbelian, TableGroup, dihedral_group, quaternion_group
from .invariants import (
    IwasawaReport,
    KidaReport,
    fit_growth,
    kida_verify,
    lambda_invariant,
    mu_invariant,
    tower_report,
    valuation_sum,
)
from .laurent import (
    LaurentPolynomial,
    ModpLaurent,
    laurent_eval,
    laurent_normalize,
    mod_p_reduce,
    ord_T_d1,
    trial_divide_sigma,
)
from .padic import INFINITY, val_p_rational
from .qwalk import charpoly_at, qwalk_growth, qwalk_weights, spectral_identity_check, transition_matrix

__version__ = "0.1.0"
