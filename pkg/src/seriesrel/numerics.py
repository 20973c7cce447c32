"""Dependency-free numerical kernel.

Special functions (standard normal CDF, scaled complementary error
function), adaptive Gauss-Kronrod quadrature on ``[a, inf)``, central finite
differences, Brent's bracketed root finder and golden-section minimisation.
Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .exceptions import BracketError, ConvergenceError, DomainError

Func = Callable[[float], float]

_EPS = 2.220446049250313e-16
_SQRT_PI = math.sqrt(math.pi)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration budget for an iterative method."""

    abs_tol: float = 1e-12
    rel_tol: float = 4 * _EPS
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("SolverConfig tolerances must be > 0")
        if self.max_iter < 1:
            raise DomainError("SolverConfig max_iter must be >= 1")


ROOT_CONFIG = SolverConfig(abs_tol=1e-12, rel_tol=4 * _EPS, max_iter=200)
EXTREMUM_CONFIG = SolverConfig(abs_tol=1e-9, rel_tol=1e-12, max_iter=200)
QUAD_CONFIG = SolverConfig(abs_tol=1e-300, rel_tol=1e-12, max_iter=2000)


@dataclass(frozen=True)
class CrossingReport:
    """Location and diagnostics of a root or extremum.

    ``residual`` is ``|value_at_root|`` normalised by the larger endpoint
    magnitude of the bracket (for roots), so it is dimensionless.
    """

    t_root: float
    value_at_root: float
    bracket: Tuple[float, float]
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "t_root": self.t_root,
            "value_at_root": self.value_at_root,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class Minimum:
    x: float
    value: float
    iterations: int
    at_boundary: bool = False


# ---------------------------------------------------------------------------
# special functions


def std_normal_cdf(z: float) -> float:
    """Standard normal distribution function via ``erfc``.

    Using ``erfc`` on both tails keeps the lower tail free of cancellation;
    ``std_normal_cdf(-40)`` underflows quietly to 0.
    """
    if not math.isfinite(z):
        raise DomainError(f"std_normal_cdf needs a finite argument, got {z!r}")
    return 0.5 * math.erfc(-z / _SQRT2)


def _erfcx_cf(z: float) -> float:
    # erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    # evaluated with the modified Lentz algorithm.
    tiny = 1e-300
    f = z
    c = z
    d = 0.0
    for k in range(1, 500):
        a = 0.5 * k
        d = z + a * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = z + a / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return 1.0 / (_SQRT_PI * f)


def erfcx(z: float) -> float:
    """Scaled complementary error function ``exp(z**2) * erfc(z)`` for z >= 0."""
    if math.isnan(z) or z < 0:
        raise DomainError(f"erfcx is implemented for z >= 0 only, got {z!r}")
    if math.isinf(z):
        return 0.0
    if z < 4.0:
        return math.exp(z * z) * math.erfc(z)
    return _erfcx_cf(z)


# ---------------------------------------------------------------------------
# quadrature

# 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def gauss_kronrod15(f: Func, a: float, b: float) -> Tuple[float, float]:
    """Single G7-K15 panel on [a, b]; returns ``(integral, error_estimate)``."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    resk = fc * _WGK[7]
    resg = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        fsum = f(center - dx) + f(center + dx)
        resk += _WGK[j] * fsum
        if j % 2 == 1:
            resg += _WG[j // 2] * fsum
    resk *= half
    resg *= half
    return resk, abs(resk - resg)


def integrate_interval(
    f: Func,
    a: float,
    b: float,
    abs_tol: float,
    rel_tol: float = 0.0,
    max_subdivisions: int = 2000,
) -> Tuple[float, float, int]:
    """Globally adaptive G7-K15 quadrature on a finite interval.

    Splits the panel with the largest error estimate until the summed
    estimate is below ``max(abs_tol, rel_tol*|integral|)``.
    Returns ``(integral, error, panels_used)``.
    """
    value, err = gauss_kronrod15(f, a, b)
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    panels = 1
    while total_err > max(abs_tol, rel_tol * abs(total)):
        tol = max(abs_tol, rel_tol * abs(total))
        if panels >= max_subdivisions:
            raise ConvergenceError(
                f"quadrature on [{a}, {b}] did not reach tol={tol:g} "
                f"within {max_subdivisions} panels (error {total_err:g})"
            )
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = gauss_kronrod15(f, lo, mid)
        v2, e2 = gauss_kronrod15(f, mid, hi)
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
    # re-sum to shed the drift of the running updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return total, total_err, panels


def integrate_semi_infinite(
    f: Func,
    a: float,
    cfg: Optional[SolverConfig] = None,
    scale: float = 1.0,
    tail_tol: float = 1e-16,
) -> float:
    """Integrate a positive, eventually exponentially decaying ``f`` over [a, inf).

    The half line is covered by panels of doubling width starting at
    ``scale``; each is integrated adaptively to ``cfg.rel_tol``. Panels stop
    once both the latest contribution and ``f`` at its right end fall below
    ``tail_tol`` times the accumulated sum.
    """
    cfg = cfg or QUAD_CONFIG
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError("scale must be positive and finite")
    parts = []
    total = 0.0
    width = scale
    lo = a
    budget = cfg.max_iter
    for _ in range(200):
        hi = lo + width
        floor = max(cfg.abs_tol, cfg.rel_tol * 0.1 * abs(total))
        val, _err, used = integrate_interval(f, lo, hi, floor, 0.1 * cfg.rel_tol, max(budget, 1))
        budget -= used
        if budget <= 0:
            raise ConvergenceError("quadrature subdivision budget exhausted")
        parts.append(val)
        total = math.fsum(parts)
        if abs(val) <= tail_tol * abs(total) and abs(f(hi)) * width <= tail_tol * abs(total):
            return total
        if total == 0.0 and f(hi) == 0.0:
            return 0.0
        lo = hi
        width *= 2.0
    raise ConvergenceError("semi-infinite quadrature tail did not decay")


# ---------------------------------------------------------------------------
# differentiation


def central_derivative(
    f: Func, t: float, h: Optional[float] = None, lower: Optional[float] = None
) -> float:
    """Second-order central difference ``(f(t+h) - f(t-h)) / 2h``.

    The default step is ``max(1e-6, 1e-6*|t|)``. If ``lower`` is given the
    stencil must not reach below it.
    """
    if h is None:
        h = max(1e-6, 1e-6 * abs(t))
    if h <= 0:
        raise DomainError("finite-difference step must be positive")
    if lower is not None and t - h < lower:
        raise DomainError(f"stencil t-h={t - h:g} falls below domain boundary {lower:g}")
    return (f(t + h) - f(t - h)) / (2.0 * h)


# ---------------------------------------------------------------------------
# root finding and minimisation


def bracketed_root(
    f: Func, a: float, b: float, cfg: Optional[SolverConfig] = None
) -> CrossingReport:
    """Brent's method: bisection safeguarding secant / inverse quadratic steps."""
    cfg = cfg or ROOT_CONFIG
    xpre, xcur = float(a), float(b)
    fpre, fcur = f(xpre), f(xcur)
    scale = max(abs(fpre), abs(fcur))
    bracket = (min(a, b), max(a, b))

    def report(x: float, fx: float, it: int) -> CrossingReport:
        return CrossingReport(x, fx, bracket, it, abs(fx) / scale if scale else 0.0)

    if math.isnan(fpre) or math.isnan(fcur):
        raise BracketError(f"function is NaN at a bracket endpoint of {bracket}")
    if fpre == 0.0:
        return report(xpre, fpre, 0)
    if fcur == 0.0:
        return report(xcur, fcur, 0)
    if (fpre > 0) == (fcur > 0):
        raise BracketError(
            f"no sign change on {bracket}: f(a)={fpre:.6g}, f(b)={fcur:.6g}"
        )

    xblk = fblk = spre = scur = 0.0
    for it in range(1, cfg.max_iter + 1):
        if fpre != 0.0 and fcur != 0.0 and (fpre > 0) != (fcur > 0):
            xblk, fblk = xpre, fpre
            spre = scur = xcur - xpre
        if abs(fblk) < abs(fcur):
            xpre, xcur, xblk = xcur, xblk, xcur
            fpre, fcur, fblk = fcur, fblk, fcur

        delta = 0.5 * (cfg.abs_tol + cfg.rel_tol * abs(xcur))
        sbis = 0.5 * (xblk - xcur)
        if fcur == 0.0 or abs(sbis) < delta:
            return report(xcur, fcur, it)

        if abs(spre) > delta and abs(fcur) < abs(fpre):
            if xpre == xblk:
                stry = -fcur * (xcur - xpre) / (fcur - fpre)
            else:
                dpre = (fpre - fcur) / (xpre - xcur)
                dblk = (fblk - fcur) / (xblk - xcur)
                stry = -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            if 2 * abs(stry) < min(abs(spre), 3 * abs(sbis) - delta):
                spre, scur = scur, stry
            else:
                spre = scur = sbis
        else:
            spre = scur = sbis

        xpre, fpre = xcur, fcur
        if abs(scur) > delta:
            xcur += scur
        else:
            xcur += delta if sbis > 0 else -delta
        fcur = f(xcur)

    raise ConvergenceError(f"root finder exceeded {cfg.max_iter} iterations on {bracket}")


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(
    f: Func, a: float, b: float, cfg: Optional[SolverConfig] = None
) -> Minimum:
    """Golden-section search for the minimum of a unimodal ``f`` on [a, b].

    Stops when the interval is shorter than ``abs_tol + rel_tol*|x|``. When
    the reduced interval hugs an endpoint whose value is no larger than the
    interior estimate, that endpoint is returned with ``at_boundary=True``.
    """
    cfg = cfg or EXTREMUM_CONFIG
    lo, hi = (a, b) if a <= b else (b, a)
    if not hi > lo:
        raise DomainError("minimize_scalar needs a non-degenerate interval")
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > cfg.abs_tol + cfg.rel_tol * abs(0.5 * (lo + hi)):
        it += 1
        if it > cfg.max_iter:
            raise ConvergenceError(f"golden section exceeded {cfg.max_iter} iterations")
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    fx = f(x)
    tol = cfg.abs_tol + cfg.rel_tol * abs(x)
    for end in (min(a, b), max(a, b)):
        if abs(x - end) <= tol:
            fe = f(end)
            if fe <= fx:
                return Minimum(end, fe, it, at_boundary=True)
    return Minimum(x, fx, it)
