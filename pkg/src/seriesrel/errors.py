"""Relative errors incurred by wrongly assuming independent components.

For a measure ``m`` the relative error at time ``t`` is
``(m_D(t) - m_I(t)) / m_I(t)``, where ``D`` is the true (dependent) model
and ``I`` the independent model with the same marginal rates. The closed
forms below are algebraically equal to that ratio but are rearranged so
they stay accurate near ``t = 0``, near zero crossings and for large ``t``.

A positive error means the independence assumption under-assesses the
measure (UA), a negative error that it over-assesses it (OA).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .exceptions import BracketError, DomainError, FlatError, SolverError
from .measures import (
    RHR_T_MIN,
    MeasureKind,
    constant_hazard,
    gumbel2_aux,
    hazard_excess,
    series_mrl,
)
from .models import Freund, GumbelI, GumbelII, Independent, ModelParams
from .numerics import (
    EXTREMUM_CONFIG,
    ROOT_CONFIG,
    CrossingReport,
    SolverConfig,
    bracketed_root,
    central_derivative,
    minimize_scalar,
)

DEFAULT_T_LOW = 1e-6
MAX_EXPANSIONS = 60


def rate_ratio_rhr_error(beta: float, gamma: float, x: float) -> float:
    """(gamma/beta) * (e^{beta x} - 1) / (e^{gamma x} - 1) - 1 for x > 0.

    This is the reversed-hazard error between two constant-hazard systems
    with rates ``gamma`` (true) and ``beta`` (assumed). It is increasing in
    ``x`` when beta > gamma and decreasing when beta < gamma.
    """
    try:
        growth = math.exp((beta - gamma) * x)
    except OverflowError:
        return math.inf
    return gamma / beta * growth * math.expm1(-beta * x) / math.expm1(-gamma * x) - 1.0


def _check_time(kind: MeasureKind, t: float) -> float:
    if not (t >= 0) or math.isinf(t):
        raise DomainError(f"t must be a finite time >= 0, got {t!r}")
    if kind is MeasureKind.RHR and t < RHR_T_MIN:
        raise DomainError(f"reversed hazard error needs t >= {RHR_T_MIN:g}, got {t!r}")
    return float(t)


def _gumbel1_error(p: GumbelI, kind: MeasureKind, t: float) -> float:
    lam, l12 = p.lam, p.lambda12
    if kind is MeasureKind.RELIABILITY:
        return math.expm1(-l12 * t * t)
    if kind is MeasureKind.HAZARD:
        return 2.0 * l12 * t / lam
    if kind is MeasureKind.MRL:
        if l12 == 0:
            return 0.0
        return lam * series_mrl(p, t) - 1.0
    s = lam * t + l12 * t * t
    return (lam + 2.0 * l12 * t) / lam * math.exp(-l12 * t * t) * math.expm1(-lam * t) / math.expm1(-s) - 1.0


def _gumbel2_error(p: GumbelII, kind: MeasureKind, t: float) -> float:
    l1, l2, a = p.lambda1, p.lambda2, p.alpha
    lam = l1 + l2
    if kind is MeasureKind.RELIABILITY:
        return a * math.expm1(-l1 * t) * math.expm1(-l2 * t)
    aux = gumbel2_aux(p, t)
    if kind is MeasureKind.HAZARD:
        return -aux.h_prime / (lam * aux.h)
    if kind is MeasureKind.MRL:
        # (1 + a - a lam g)/h - 1 with the leading 1 + a cancelled analytically
        e1, e2 = math.exp(-l1 * t), math.exp(-l2 * t)
        num = l1 * e1 / (lam + l1) + l2 * e2 / (lam + l2) - 0.5 * math.exp(-lam * t)
        return a * num / aux.h
    decay = math.exp(-lam * t)
    cdf_i = -math.expm1(-lam * t)
    cdf_d = cdf_i - a * math.expm1(-l1 * t) * math.expm1(-l2 * t) * decay
    return cdf_i * (lam * aux.h - aux.h_prime) / (lam * cdf_d) - 1.0


def relative_error(params: ModelParams, kind: MeasureKind, t: float) -> float:
    """Relative error of measure ``kind`` at ``t`` under false independence."""
    t = _check_time(kind, t)
    if isinstance(params, (Independent, Freund)):
        return 0.0
    if isinstance(params, GumbelI):
        return _gumbel1_error(params, kind, t)
    if isinstance(params, GumbelII):
        return _gumbel2_error(params, kind, t)

    lam = params.lam
    excess = hazard_excess(params)
    rate = constant_hazard(params)
    if kind is MeasureKind.RELIABILITY:
        try:
            return math.expm1(-excess * t)
        except OverflowError:
            return math.inf
    if kind is MeasureKind.HAZARD:
        return excess / lam
    if kind is MeasureKind.MRL:
        return -excess / rate
    return rate_ratio_rhr_error(lam, rate, t)


def asymptote(params: ModelParams, kind: MeasureKind) -> Optional[float]:
    """Limit of the relative error as t -> inf; None when it diverges."""
    if isinstance(params, (Independent, Freund)):
        return 0.0
    if isinstance(params, GumbelI):
        if params.lambda12 == 0:
            return 0.0
        return None if kind is MeasureKind.HAZARD else -1.0
    if isinstance(params, GumbelII):
        if kind in (MeasureKind.HAZARD, MeasureKind.MRL):
            return 0.0
        return float(params.alpha)

    excess = hazard_excess(params)
    if kind is MeasureKind.HAZARD:
        return excess / params.lam
    if kind is MeasureKind.MRL:
        return -excess / constant_hazard(params)
    # reliability and reversed hazard both behave like exp(-excess t) - 1
    if excess > 0:
        return -1.0
    if excess < 0:
        return None
    return 0.0


@dataclass(frozen=True)
class RelativeErrorCurve:
    model: ModelParams
    kind: MeasureKind
    samples: Tuple[Tuple[float, float], ...]
    asymptote: Optional[float]

    def __post_init__(self):
        ts = [t for t, _ in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("curve samples must be strictly increasing in t")
        if any(not math.isfinite(e) for _, e in self.samples):
            raise DomainError("curve contains a non-finite error value")


def error_curve(params: ModelParams, kind: MeasureKind, times: Iterable[float]) -> RelativeErrorCurve:
    samples = tuple((float(t), relative_error(params, kind, t)) for t in times)
    return RelativeErrorCurve(params, kind, samples, asymptote(params, kind))


# ---------------------------------------------------------------------------
# sign classification


class Verdict(enum.Enum):
    ALWAYS_OA = "AlwaysOA"
    ALWAYS_UA = "AlwaysUA"
    ZERO = "Zero"
    SWITCH_UA_TO_OA = "SwitchUAtoOA"
    SWITCH_OA_TO_UA = "SwitchOAtoUA"
    PARAM_DEPENDENT = "ParamDependent"


# sign of the relative error -> assessment made by the independence model
ASSESSMENT = {1: "UA", -1: "OA", 0: "0"}


@dataclass(frozen=True)
class SignVerdict:
    """Over/under-assessment classification of one error curve.

    ``resolved`` is set for ``PARAM_DEPENDENT`` and holds the verdict at the
    parameters actually supplied.
    """

    verdict: Verdict
    threshold: Optional[float] = None
    resolved: Optional["SignVerdict"] = None
    crossing: Optional[CrossingReport] = field(default=None, compare=False)

    def __post_init__(self):
        switching = self.verdict in (Verdict.SWITCH_OA_TO_UA, Verdict.SWITCH_UA_TO_OA)
        if switching != (self.threshold is not None):
            raise DomainError(f"{self.verdict.value} threshold mismatch: {self.threshold!r}")
        if self.threshold is not None and not self.threshold > 0:
            raise DomainError("threshold must be > 0")

    def label(self) -> str:
        v = self.verdict
        if v is Verdict.ALWAYS_OA:
            return "OA"
        if v is Verdict.ALWAYS_UA:
            return "UA"
        if v is Verdict.ZERO:
            return "0"
        if v is Verdict.SWITCH_UA_TO_OA:
            return f"UA if t<{self.threshold:.4g}; OA if t>{self.threshold:.4g}"
        if v is Verdict.SWITCH_OA_TO_UA:
            return f"OA if t<{self.threshold:.4g}; UA if t>{self.threshold:.4g}"
        inner = self.resolved.label() if self.resolved else "?"
        return f"depends on parameters ({inner} here)"

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "label": self.label(), "threshold": self.threshold}
        if self.resolved is not None:
            out["resolved"] = self.resolved.to_dict()
        return out


def _time_scales(params: ModelParams) -> List[float]:
    rates = [params.lambda1, params.lambda2, params.lam]
    if isinstance(params, GumbelI) and params.lambda12 > 0:
        rates.append(math.sqrt(params.lambda12))
    lambda12 = getattr(params, "lambda12", 0.0)
    if lambda12 > 0:
        rates.append(lambda12)
    return rates


def classification_grid(params: ModelParams, n: int = 400) -> List[float]:
    """Log-spaced times from far below to far beyond every model time scale."""
    rates = _time_scales(params)
    lo = 1e-6 / max(rates)
    hi = 60.0 / min(rates)
    step = math.log(hi / lo) / (n - 1)
    return [lo * math.exp(i * step) for i in range(n)]


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _classify_numerically(params: ModelParams, kind: MeasureKind) -> SignVerdict:
    grid = classification_grid(params)
    values = [relative_error(params, kind, t) for t in grid]
    signed = [(t, _sign(v)) for t, v in zip(grid, values) if _sign(v) != 0]
    if not signed:
        return SignVerdict(Verdict.ZERO)
    changes = [(a, b) for a, b in zip(signed, signed[1:]) if a[1] != b[1]]
    if not changes:
        return SignVerdict(Verdict.ALWAYS_UA if signed[0][1] > 0 else Verdict.ALWAYS_OA)
    if len(changes) > 1:
        raise SolverError(
            f"{kind.value} error of {type(params).__name__} changes sign {len(changes)} times"
        )
    (t_a, s_a), (t_b, _) = changes[0]
    report = find_crossing(params, kind, (t_a, t_b))
    verdict = Verdict.SWITCH_UA_TO_OA if s_a > 0 else Verdict.SWITCH_OA_TO_UA
    return SignVerdict(verdict, threshold=report.t_root, crossing=report)


def classify_sign(params: ModelParams, kind: MeasureKind) -> SignVerdict:
    """Classify the error curve as always OA/UA, zero, or switching at a threshold.

    The verdict is read off the actual sign pattern of the error on a wide
    log-spaced grid; a single sign change is refined with :func:`find_crossing`.
    The Gumbel II reliability error carries the sign of ``alpha`` and is
    reported as ``PARAM_DEPENDENT`` with the verdict for this ``alpha`` attached.
    """
    if isinstance(params, (Independent, Freund)):
        return SignVerdict(Verdict.ZERO)
    verdict = _classify_numerically(params, kind)
    if isinstance(params, GumbelII) and kind is MeasureKind.RELIABILITY:
        return SignVerdict(Verdict.PARAM_DEPENDENT, resolved=verdict)
    return verdict


# ---------------------------------------------------------------------------
# crossings and extrema


def _default_low(kind: MeasureKind) -> float:
    return max(DEFAULT_T_LOW, RHR_T_MIN) if kind is MeasureKind.RHR else DEFAULT_T_LOW


def find_crossing(
    params: ModelParams,
    kind: MeasureKind,
    bracket: Optional[Tuple[float, float]] = None,
    cfg: Optional[SolverConfig] = None,
) -> CrossingReport:
    """Zero of the relative error inside ``bracket``.

    Without a bracket the search starts on ``(1e-6, 10/lambda)`` and doubles
    the upper end until the error changes sign (at most 60 times).
    """

    def f(t: float) -> float:
        return relative_error(params, kind, t)

    if bracket is None:
        lo, hi = _default_low(kind), 10.0 / params.lam
        f_lo = f(lo)
        for _ in range(MAX_EXPANSIONS + 1):
            f_hi = f(hi)
            if _sign(f_lo) * _sign(f_hi) < 0:
                break
            hi *= 2.0
        else:
            raise BracketError(
                f"{kind.value} error of {type(params).__name__} has no sign change on "
                f"({lo:g}, {hi / 2:g})"
            )
        bracket = (lo, hi)
    return bracketed_root(f, bracket[0], bracket[1], cfg or ROOT_CONFIG)


def _interior_extremum(ts: Sequence[float], vs: Sequence[float]) -> Optional[Tuple[int, int]]:
    """Index and direction (+1 max, -1 min) of the largest interior local extremum."""
    best = None
    for i in range(1, len(ts) - 1):
        for direction in (1, -1):
            a, b, c = direction * vs[i - 1], direction * vs[i], direction * vs[i + 1]
            if b >= a and b >= c and (b > a or b > c):
                if best is None or abs(vs[i]) > abs(vs[best[0]]):
                    best = (i, direction)
    return best


def _linspace(a: float, b: float, n: int) -> List[float]:
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def find_extremum(
    params: ModelParams,
    kind: MeasureKind,
    bracket: Optional[Tuple[float, float]] = None,
    cfg: Optional[SolverConfig] = None,
    samples: int = 257,
) -> CrossingReport:
    """Interior maximum or minimum of the relative error.

    The bracket is sampled to decide whether the extremum is a maximum or a
    minimum and to isolate it, then refined by golden-section search.
    ``residual`` holds the central-difference slope at the extremum scaled
    by bracket width over value scale.
    """

    def f(t: float) -> float:
        return relative_error(params, kind, t)

    expand = bracket is None
    lo, hi = bracket if bracket is not None else (_default_low(kind), 10.0 / params.lam)
    if not hi > lo:
        raise DomainError(f"bracket must satisfy lo < hi, got {(lo, hi)}")
    for _ in range(MAX_EXPANSIONS + 1):
        ts = _linspace(lo, hi, samples)
        vs = [f(t) for t in ts]
        spread = max(vs) - min(vs)
        if spread <= 1e-14 * max(1.0, max(abs(v) for v in vs)):
            raise FlatError(
                f"{kind.value} error of {type(params).__name__} is constant on ({lo:g}, {hi:g})"
            )
        found = _interior_extremum(ts, vs)
        if found is not None or not expand:
            break
        hi *= 2.0
    if found is None:
        raise BracketError(
            f"{kind.value} error of {type(params).__name__} has no interior extremum "
            f"on ({lo:g}, {hi:g})"
        )
    i, direction = found
    best = minimize_scalar(lambda t: -direction * f(t), ts[i - 1], ts[i + 1], cfg or EXTREMUM_CONFIG)
    t_star = best.x
    value = f(t_star)
    h = max(1e-6, 1e-6 * t_star)
    slope = central_derivative(f, t_star, h) if t_star - h > lo * 0.5 else 0.0
    scale = max(abs(v) for v in vs)
    return CrossingReport(
        t_root=t_star,
        value_at_root=value,
        bracket=(lo, hi),
        iterations=best.iterations,
        residual=abs(slope) * (hi - lo) / scale,
    )
