"""Multi-soliton KdV fields from degenerate hyperelliptic curve data.

The pipeline: wavenumbers -> curve polynomials -> structural matrices
-> closed-form period data -> finite theta sum -> soliton field, with
an independent verification layer (Hirota tau oracle, finite
differences, flow-equation residual) on top.
"""

from .curve import ChiTable, SolitonCurve, chi_table, new_curve
from .errors import (
    DimensionMismatch,
    DuplicateWavenumber,
    EmptyWavenumbers,
    GaugeAmbiguous,
    GenusTooSmall,
    KdvSigmaError,
    NonPositiveWavenumber,
    NonRealField,
    NumericalError,
    SingularMatrix,
    ThetaZero,
    ValidationError,
)
from .kdvcheck import (
    ChainRule,
    CheckResult,
    RECORDED_FLOW_SIGN,
    VerificationReport,
    chain_rule,
    hirota_tau,
    kdv_residual,
    oracle_compare,
    run_suite,
)
from .periods import PeriodData, period_data
from .polynomial import Polynomial
from .structmat import ComplexMatrix
from .theta import (
    ExponentialSum,
    HirotaGauge,
    PhasePoint,
    build_theta,
    canonical_tau,
    derive,
    eval_sum,
    field_offset,
    hirota_gauge,
    log_derivative,
    log_second_derivative,
    to_hirota_gauge,
    u_field,
    wp_tilde,
)

__version__ = "0.1.0"
