"""Hausdorff operators on weighted mixed-norm Fock spaces."""
from .config import DEFAULT, INF, QuadConfig
from .entire import TaylorPoly, circle_mean, dilate, evaluate
from .errors import (ConsistencyError, DivergenceError, DomainError, HausfockError,
                     MathPreconditionError, PreconditionError, SingularMultiplierError,
                     UnboundedOperatorError, UndecidableError, ValidationError)
from .fockspace import MixedNormParams, NormResult, mixed_norm, monomial_norm_growth, normalized_monomial
from .harness import VerificationSuiteResult, empirical_opnorm, run_all, run_suite
from .hausdorff import (CriteriaReport, HausdorffOperator, ProbeResult, apply_multiplier,
                        apply_quadrature, cesaro_identity_residual, cesaro_mean, criteria,
                        operator_norm, power, probe_conjecture)
from .measure import (Atom, DensityPiece, MeasureSpec, MomentTable, constant_density, delta, flett,
                      hardy, harmonic_mass, mass, moment, moment_table)
from .weights import (ClassReport, Exp, ExpExp, Gaussian, LogPow, Power, WeightSpec,
                      check_class_C, check_class_Wp, derivative_identity_residual, weight_from_json)

__all__ = [
    "DEFAULT", "INF", "QuadConfig", "TaylorPoly", "circle_mean", "dilate", "evaluate",
    "ConsistencyError", "DivergenceError", "DomainError", "HausfockError",
    "MathPreconditionError", "PreconditionError", "SingularMultiplierError",
    "UnboundedOperatorError", "UndecidableError", "ValidationError", "MixedNormParams",
    "NormResult", "mixed_norm", "monomial_norm_growth", "normalized_monomial",
    "VerificationSuiteResult", "empirical_opnorm", "run_all", "run_suite", "CriteriaReport",
    "HausdorffOperator", "ProbeResult", "apply_multiplier", "apply_quadrature",
    "cesaro_identity_residual", "cesaro_mean", "criteria", "operator_norm", "power",
    "probe_conjecture", "Atom", "DensityPiece", "MeasureSpec", "MomentTable",
    "constant_density", "delta", "flett", "hardy", "harmonic_mass", "mass", "moment",
    "moment_table", "ClassReport", "Exp", "ExpExp", "Gaussian", "LogPow", "Power", "WeightSpec",
    "check_class_C", "check_class_Wp", "derivative_identity_residual", "weight_from_json",
]

__version__ = "0.1.0"
