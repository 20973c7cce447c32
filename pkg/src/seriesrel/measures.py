"""Closed-form reliability measures of a two-component series system.

For a series system ``T = min(X1, X2)`` the survival function is the joint
survival on the diagonal. Every model then reduces to one of three shapes:
a constant hazard rate (Independent, Gumbel III, Freund, Marshall-Olkin,
Block-Basu, Cowan, Sarkar), a linearly increasing hazard (Gumbel I) or an
exponential tilted by ``h(t)`` (Gumbel II).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .exceptions import DomainError
from .models import (
    BlockBasu,
    Cowan,
    Freund,
    GumbelI,
    GumbelII,
    GumbelIII,
    Independent,
    MarshallOlkin,
    ModelParams,
    Sarkar,
    derived_rates,
)
from .numerics import erfcx

# smallest t at which the reversed hazard rate is evaluated; it behaves like 1/t below
RHR_T_MIN = 1e-12


class MeasureKind(enum.Enum):
    RELIABILITY = "reliability"
    HAZARD = "hazard"
    MRL = "mrl"
    RHR = "rhr"

    @classmethod
    def parse(cls, text: str) -> "MeasureKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise DomainError(
                f"unknown measure {text!r}; choose from {', '.join(k.value for k in cls)}"
            ) from None


@dataclass(frozen=True)
class Gumbel2Aux:
    """The tilt ``h(t)``, its derivative and the MRL helper ``g(t)``."""

    h: float
    h_prime: float
    g: float


def _check_t(t: float, kind: str = "t") -> float:
    if not (t >= 0) or math.isinf(t):
        raise DomainError(f"{kind} must be a finite time >= 0, got {t!r}")
    return float(t)


def constant_hazard(params: ModelParams) -> Optional[float]:
    """The constant series hazard rate, or None for the Gumbel I/II models."""
    match params:
        case Independent() | Freund():
            return params.lam
        case GumbelIII():
            return derived_rates(params).lambda3
        case MarshallOlkin() | BlockBasu() | Sarkar():
            return params.lam + params.lambda12
        case Cowan():
            return 0.5 * derived_rates(params).alpha_star
    return None


def hazard_excess(params: ModelParams) -> float:
    """Constant hazard minus lambda1 + lambda2, formed without cancellation."""
    match params:
        case Independent() | Freund():
            return 0.0
        case MarshallOlkin() | BlockBasu() | Sarkar():
            return params.lambda12
        case GumbelIII():
            return derived_rates(params).lambda3 - params.lam
        case Cowan():
            if params.theta == math.pi:
                return 0.0  # cos(pi/2) rounds to 6e-17, not 0
            l1, l2 = params.lambda1, params.lambda2
            c = math.cos(0.5 * params.theta)
            radical = derived_rates(params).alpha_star - params.lam
            # (radical - lam)/2 == -2 l1 l2 cos^2(theta/2) / (radical + lam)
            return -2.0 * l1 * l2 * c * c / (radical + params.lam)
    raise DomainError(f"{type(params).__name__} has no constant hazard rate")


def gumbel1_delta(params: GumbelI, t: float) -> float:
    """delta(t) = lambda12 * (t + lambda/(2 lambda12))**2."""
    if params.lambda12 == 0:
        raise DomainError("delta(t) is undefined for lambda12 = 0")
    return params.lambda12 * (t + params.lam / (2.0 * params.lambda12)) ** 2


def gumbel2_aux(params: GumbelII, t: float) -> Gumbel2Aux:
    t = _check_t(t)
    l1, l2, a = params.lambda1, params.lambda2, params.alpha
    lam = l1 + l2
    e1, e2 = math.exp(-l1 * t), math.exp(-l2 * t)
    u1, u2 = -math.expm1(-l1 * t), -math.expm1(-l2 * t)
    h = 1.0 + a * u1 * u2
    h_prime = a * (l1 * e1 * u2 + l2 * e2 * u1)
    g = e1 / (lam + l1) + e2 / (lam + l2) - math.exp(-lam * t) / (2.0 * lam)
    return Gumbel2Aux(h, h_prime, g)


def series_survival(params: ModelParams, t: float) -> float:
    t = _check_t(t)
    match params:
        case GumbelI():
            return math.exp(-params.lam * t - params.lambda12 * t * t)
        case GumbelII():
            tilt = params.alpha * math.expm1(-params.lambda1 * t) * math.expm1(-params.lambda2 * t)
            return math.exp(-params.lam * t) * (1.0 + tilt)
    return math.exp(-constant_hazard(params) * t)


def series_hazard(params: ModelParams, t: float) -> float:
    t = _check_t(t)
    match params:
        case GumbelI():
            return params.lam + 2.0 * params.lambda12 * t
        case GumbelII():
            aux = gumbel2_aux(params, t)
            return params.lam - aux.h_prime / aux.h
    return constant_hazard(params)


def series_mrl(params: ModelParams, t: float) -> float:
    """Mean residual life E[T - t | T > t].

    Gumbel I uses ``0.5*sqrt(pi/lambda12)*erfcx(sqrt(delta))``, which equals
    the Gaussian-tail form ``sqrt(pi/lambda12) e^delta (1 - Phi(sqrt(2 delta)))``
    but never overflows.
    """
    t = _check_t(t)
    match params:
        case GumbelI():
            l12 = params.lambda12
            if l12 == 0:
                return 1.0 / params.lam
            r = math.sqrt(l12)
            root_delta = r * t + params.lam / (2.0 * r)
            return 0.5 * math.sqrt(math.pi / l12) * erfcx(root_delta)
        case GumbelII():
            aux = gumbel2_aux(params, t)
            a = params.alpha
            return ((1.0 + a) / params.lam - a * aux.g) / aux.h
    return 1.0 / constant_hazard(params)


def series_rhr(params: ModelParams, t: float) -> float:
    """Reversed hazard rate f(t)/F(t), defined for t >= RHR_T_MIN."""
    t = _check_t(t)
    if t < RHR_T_MIN:
        raise DomainError(f"reversed hazard rate needs t >= {RHR_T_MIN:g}, got {t!r}")
    match params:
        case GumbelI():
            s = params.lam * t + params.lambda12 * t * t
            return (params.lam + 2.0 * params.lambda12 * t) * math.exp(-s) / -math.expm1(-s)
        case GumbelII():
            lam = params.lam
            aux = gumbel2_aux(params, t)
            decay = math.exp(-lam * t)
            # 1 - h e^{-lam t} = (1 - e^{-lam t}) - (h - 1) e^{-lam t}
            h_minus_1 = params.alpha * math.expm1(-params.lambda1 * t) * math.expm1(-params.lambda2 * t)
            cdf = -math.expm1(-lam * t) - h_minus_1 * decay
            return decay * (lam * aux.h - aux.h_prime) / cdf
    c = constant_hazard(params)
    return c * math.exp(-c * t) / -math.expm1(-c * t)


_DISPATCH = {
    MeasureKind.RELIABILITY: series_survival,
    MeasureKind.HAZARD: series_hazard,
    MeasureKind.MRL: series_mrl,
    MeasureKind.RHR: series_rhr,
}


def measure(params: ModelParams, kind: MeasureKind, t: float) -> float:
    """Evaluate the measure ``kind`` of the series system at time ``t``."""
    return _DISPATCH[kind](params, t)
