"""Projectively equivariant Schwarzian derivative in several dimensions.

Exact truncated Taylor (jet) arithmetic drives everything: projective
connection symbols and the cocycle ``ell``, operator symbols ``T`` and the
Schwarzian ``S(f) = T(f*Pi) - T(Pi)``, and the action of diffeomorphisms on
second-order operators acting on tensor densities.
"""

from .checks import CHECK_NAMES, CheckReport, run_check, run_suite
from .connection import (
    ChristoffelField,
    ProjectiveField,
    S2OperatorValue,
    Tensor21Value,
    ell_cocycle,
    ell_flat,
    flat_connection,
    operator_symbols,
    pi_from_gamma,
    pullback_connection,
    pullback_s2_operator,
    t_difference,
    tensor21_pullback,
)
from .density import (
    OperatorCoeffs,
    OperatorValue,
    SymbolField,
    SymbolTriple,
    act_direct,
    act_explicit,
    density_pullback,
    sturm_liouville_act,
    symbol_map,
    symbol_map_field,
    symbol_map_inverse,
)
from .diffeo import (
    Diffeo,
    compose_diffeos,
    identity,
    invert,
    jet_at,
    make_affine,
    make_moebius,
)
from .errors import (
    ConvergenceError,
    DataError,
    DimensionError,
    DomainError,
    EvaluationError,
    JetError,
    ParseError,
    ProjSchwarzError,
    ScenarioError,
    SingularJacobianError,
)
from .expr import parse_expression
from .jet import Jet, MapJet, compose, inv, jacobian_det, jet_var, log, map_inverse, partial
from .scenario import load_scenario
from .schwarzian import (
    classical_schwarzian,
    schwarzian,
    schwarzian_coord,
    schwarzian_flat,
    verify_jacobian_identity,
)

__version__ = "0.1.0"

__all__ = [
    "CHECK_NAMES",
    "CheckReport",
    "run_check",
    "run_suite",
    "ChristoffelField",
    "ProjectiveField",
    "S2OperatorValue",
    "Tensor21Value",
    "ell_cocycle",
    "ell_flat",
    "flat_connection",
    "operator_symbols",
    "pi_from_gamma",
    "pullback_connection",
    "pullback_s2_operator",
    "t_difference",
    "tensor21_pullback",
    "OperatorCoeffs",
    "OperatorValue",
    "SymbolField",
    "SymbolTriple",
    "act_direct",
    "act_explicit",
    "density_pullback",
    "sturm_liouville_act",
    "symbol_map",
    "symbol_map_field",
    "symbol_map_inverse",
    "Diffeo",
    "compose_diffeos",
    "identity",
    "invert",
    "jet_at",
    "make_affine",
    "make_moebius",
    "ConvergenceError",
    "DataError",
    "DimensionError",
    "DomainError",
    "EvaluationError",
    "JetError",
    "ParseError",
    "ProjSchwarzError",
    "ScenarioError",
    "SingularJacobianError",
    "parse_expression",
    "Jet",
    "MapJet",
    "compose",
    "inv",
    "jacobian_det",
    "jet_var",
    "log",
    "map_inverse",
    "partial",
    "load_scenario",
    "classical_schwarzian",
    "schwarzian",
    "schwarzian_coord",
    "schwarzian_flat",
    "verify_jacobian_identity",
]
