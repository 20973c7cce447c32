"""Reliability measures of two-component series systems with dependent
exponential lifetimes, and the relative errors made by assuming independence."""

from .errors import (
    RelativeErrorCurve,
    SignVerdict,
    Verdict,
    asymptote,
    classify_sign,
    error_curve,
    find_crossing,
    find_extremum,
    relative_error,
)
from .exceptions import (
    BracketError,
    ConvergenceError,
    DomainError,
    FlatError,
    SeriesRelError,
    SolverError,
)
from .measures import (
    MeasureKind,
    measure,
    series_hazard,
    series_mrl,
    series_rhr,
    series_survival,
)
from .models import (
    MODELS,
    BlockBasu,
    Cowan,
    DerivedRates,
    Freund,
    GumbelI,
    GumbelII,
    GumbelIII,
    Independent,
    MarshallOlkin,
    ModelParams,
    Sarkar,
    derived_rates,
    from_dict,
    joint_survival,
    to_dict,
    validate,
)
from .numerics import CrossingReport, SolverConfig

__version__ = "0.1.0"
