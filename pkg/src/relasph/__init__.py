"""relasph: asphericity and diagrammatic reducibility of one-relator
relative presentations <G, x | x^l g x^k h>.

The library provides exact word algebra over free products, Todd-Coxeter
coset enumeration (the single oracle for all finite-group claims), star
graphs with the weight test, picture/dipole calculus with curvature
bookkeeping, and a classifier for the length-four relator families.
"""

from .classify import (
    CaseFlags,
    CaseVerdict,
    LengthFourInstance,
    case_flags,
    classify,
    instance_from_presentation,
    verify_verdict,
)
from .coset import (
    DEFAULT_CAP,
    CosetTable,
    GroupContext,
    LiftedPresentation,
    context_for,
    enumerate_cosets,
    group_order,
    lift,
    mu_of,
    words_equal,
)
from .pictures import (
    Picture,
    cancel_dipole,
    curvature,
    find_dipole,
    standard_angles,
    validate_picture,
)
from .stargraph import StarGraph, admissible_cycles, build_star_graph
from .weights import WeightFunction, check_weight_function, search_weight_function
from .words import (
    CoefficientGroup,
    FreeProductWord,
    OrderResult,
    RelativePresentation,
    TriState,
    cyclically_reduce,
    free_product_length,
    is_orientable,
    is_proper_power,
    mu,
    parse_presentation,
)

__version__ = "0.1.0"

__all__ = [
    "CaseFlags", "CaseVerdict", "LengthFourInstance", "case_flags",
    "classify", "instance_from_presentation", "verify_verdict",
    "DEFAULT_CAP", "CosetTable", "GroupContext", "LiftedPresentation",
    "context_for", "enumerate_cosets", "group_order", "lift", "mu_of",
    "words_equal", "Picture", "cancel_dipole", "curvature", "find_dipole",
    "standard_angles", "validate_picture", "StarGraph", "admissible_cycles",
    "build_star_graph", "WeightFunction", "check_weight_function",
    "search_weight_function", "CoefficientGroup", "FreeProductWord",
    "OrderResult", "RelativePresentation", "TriState", "cyclically_reduce",
    "free_product_length", "is_orientable", "is_proper_power", "mu",
    "parse_presentation",
]
