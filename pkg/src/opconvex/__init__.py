"""Convexity-type inequalities for positive linear operators given by
generating functions: weights, sign conditions, functional values and
brute-force cross-checks."""

from .families import (
    OperatorFamily,
    PhiOracle,
    baskakov,
    bernstein,
    coefficients,
    first_moment,
    generating_series,
    mastroianni,
    parse_family,
    schurer,
    szasz,
    tail_mass,
    validate_phi,
)
from .functionals import FunctionalFamily, TestFunction, dirac, sliding_average, test_function
from .inequalities import (
    SignClassification,
    beta_closed_form,
    beta_series,
    classify_signs,
    em_quotient,
    em_series,
    gusic_gap,
    squared_quotient_coefficients,
)
from .reports import CheckReport, emit_report
from .series import TruncatedSeries
from .values import (
    FunctionalValue,
    bm_value,
    bm_value_via_representation,
    cm_value,
    decomposition_check,
    jensen_gap,
    operator_value,
    rasa_functional,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "FunctionalFamily",
    "FunctionalValue",
    "OperatorFamily",
    "PhiOracle",
    "SignClassification",
    "TestFunction",
    "TruncatedSeries",
    "baskakov",
    "bernstein",
    "beta_closed_form",
    "beta_series",
    "bm_value",
    "bm_value_via_representation",
    "classify_signs",
    "cm_value",
    "coefficients",
    "decomposition_check",
    "dirac",
    "em_quotient",
    "em_series",
    "emit_report",
    "first_moment",
    "generating_series",
    "gusic_gap",
    "jensen_gap",
    "mastroianni",
    "operator_value",
    "parse_family",
    "rasa_functional",
    "schurer",
    "sliding_average",
    "squared_quotient_coefficients",
    "szasz",
    "tail_mass",
    "test_function",
    "validate_phi",
]
