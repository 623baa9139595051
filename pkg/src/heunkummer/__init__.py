"""Confluent Heun equation solutions as series of Kummer 1F1 functions.

Modules:
  kummer       1F1 evaluation and the recurrence identities between
               contiguous parameter shifts
  che_core     equation parameters, residual operator, power-series oracle,
               z -> 1-z transform
  expansions   the expansion families (two-, three-, four-term recurrences)
  termination  termination detection and accessory-parameter spectra
  twostate     Lorentzian two-state model, closed form and RK oracle
  cli          command-line interface (also installed as `heunkummer`)
"""

from .che_core import (
    CheParams,
    LocalSeries,
    frobenius_coefficients,
    frobenius_eval,
    residual,
    transform_1_minus_z,
)
from .errors import (
    ApplicabilityError,
    BranchAmbiguityWarning,
    ConditionNotMetError,
    HeunKummerError,
    HeunKummerWarning,
    IllConditionedRootsError,
    LargeArgumentWarning,
    LeadingCoefficientVanishesError,
    NonConvergenceError,
    PoleAtGammaError,
    PoleAtLowerParameterError,
    SingularPointError,
    StepTooCoarseError,
    TailTooLargeError,
    TruncationWarning,
)
from .expansions import (
    ALPHA_OVER_EPS,
    GAMMA_CHOICE,
    Family,
    SeriesSolution,
    applicability,
    build_a1_descending,
    build_series,
    eval_series,
    eval_series_with_derivatives,
    recurrence_coeffs,
    resubstitution_residual,
    series_ode_residual,
)
from .kummer import (
    IDENTITY_IDS,
    KummerArgs,
    eval_1f1,
    eval_1f1_derivative,
    identity_residual,
    kummer_ode_residual,
    pochhammer,
)
from .termination import (
    QSpectrum,
    TerminationCondition,
    detect_termination,
    enumerate_termination_conditions,
    polynomial_certificate,
    q_spectrum,
    terminated_solution,
    verify_termination,
)
from .twostate import (
    ClosedForm,
    LorentzianModel,
    MatchResult,
    Trajectory,
    TwoStateReduction,
    closed_form_a2,
    closed_form_solution,
    equation_residual_in_t,
    integrate_rk,
    locate_return_delta0,
    match_against_rk,
    reduce_to_che,
    return_spectrum_relation,
)

__version__ = "0.1.0"
