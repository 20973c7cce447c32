"""Independent numerical cross-checks of the closed-form measures.

Each oracle goes back to a defining relation instead of the closed form:
the MRL is a quadrature of the survival curve, the hazard and reversed
hazard come from a finite-difference density, and the series survival is
compared with the joint survival on the diagonal.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from .exceptions import DomainError
from .measures import MeasureKind, measure, series_survival
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
    joint_survival,
    to_dict,
)
from .numerics import QUAD_CONFIG, SolverConfig, central_derivative, integrate_semi_infinite

# relative tolerances per check; finite differences are the loosest
TOLERANCES: Dict[MeasureKind, float] = {
    MeasureKind.RELIABILITY: 1e-12,
    MeasureKind.HAZARD: 1e-6,
    MeasureKind.MRL: 1e-8,
    MeasureKind.RHR: 1e-6,
}

_F_GUARD = 1e-14


@dataclass(frozen=True)
class OracleReport:
    """Worst relative deviation between a closed form and its oracle.

    ``kind`` RELIABILITY denotes the diagonal-consistency check.
    """

    model: ModelParams
    kind: MeasureKind
    grid: tuple
    max_rel_dev: float
    worst_t: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_dev <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "model": to_dict(self.model),
            "kind": self.kind.value,
            "grid": {"min": min(self.grid), "max": max(self.grid), "points": len(self.grid)},
            "max_rel_dev": self.max_rel_dev,
            "worst_t": self.worst_t,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _density(params: ModelParams, t: float) -> float:
    # d/dt (1 - S) computed as -dS/dt: differencing S itself keeps the
    # far tail, where S ~ 1e-13, free of cancellation against 1
    return -central_derivative(lambda x: series_survival(params, x), t, lower=0.0)


def mrl_oracle(params: ModelParams, t: float, cfg: Optional[SolverConfig] = None) -> float:
    """Integral of the survival curve over [t, inf) divided by S(t)."""
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    tail = integrate_semi_infinite(
        lambda x: series_survival(params, x), t, cfg or QUAD_CONFIG, scale=1.0 / params.lam
    )
    return tail / series_survival(params, t)


def hazard_oracle(params: ModelParams, t: float) -> float:
    return _density(params, t) / series_survival(params, t)


def rhr_oracle(params: ModelParams, t: float) -> float:
    cdf = 1.0 - series_survival(params, t)
    if cdf < _F_GUARD:
        raise DomainError(f"F(t)={cdf:g} too small for a reversed hazard estimate at t={t:g}")
    return _density(params, t) / cdf


_ORACLES: Dict[MeasureKind, Callable[[ModelParams, float], float]] = {
    MeasureKind.HAZARD: hazard_oracle,
    MeasureKind.MRL: mrl_oracle,
    MeasureKind.RHR: rhr_oracle,
}


def _rel_dev(value: float, reference: float) -> float:
    if value == reference:
        return 0.0
    return abs(value - reference) / abs(reference)


def _report(params, kind, grid, pairs) -> OracleReport:
    worst_t, worst = grid[0], 0.0
    for t, (value, reference) in zip(grid, pairs):
        dev = _rel_dev(value, reference)
        if not dev <= worst:  # catches NaN too
            worst_t, worst = t, dev
    return OracleReport(params, kind, tuple(grid), worst, worst_t, TOLERANCES[kind])


def diagonal_consistency(params: ModelParams, grid: Sequence[float]) -> OracleReport:
    """Compare joint_survival(t, t) with series_survival(t) over ``grid``."""
    grid = list(grid)
    if not grid or min(grid) <= 0:
        raise DomainError("grid must be non-empty and positive")
    pairs = [(joint_survival(params, t, t), series_survival(params, t)) for t in grid]
    return _report(params, MeasureKind.RELIABILITY, grid, pairs)


def check_measure(params: ModelParams, kind: MeasureKind, grid: Sequence[float]) -> OracleReport:
    """Compare the closed form of ``kind`` against its oracle on ``grid``."""
    if kind is MeasureKind.RELIABILITY:
        return diagonal_consistency(params, grid)
    grid = list(grid)
    oracle = _ORACLES[kind]
    pairs = [(measure(params, kind, t), oracle(params, t)) for t in grid]
    return _report(params, kind, grid, pairs)


def verify_model(params: ModelParams, grid: Sequence[float]) -> List[OracleReport]:
    """All four checks for one model, in MeasureKind order."""
    return [check_measure(params, kind, grid) for kind in MeasureKind]


def random_params(cls: type, rng: random.Random) -> ModelParams:
    """Draw valid parameters kept away from degenerate boundaries."""
    l1, l2 = rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0)
    lam = l1 + l2
    if cls is Independent:
        return Independent(l1, l2)
    if cls is GumbelI:
        return GumbelI(l1, l2, rng.uniform(0.0, 0.95) * l1 * l2)
    if cls is GumbelII:
        return GumbelII(l1, l2, rng.uniform(-0.95, 0.95))
    if cls is GumbelIII:
        return GumbelIII(l1, l2, rng.uniform(1.0, 5.0))
    if cls is Freund:
        thetas = []
        while len(thetas) < 2:
            th = rng.uniform(0.1, 5.0)
            if abs(th - lam) >= 0.1 * lam:
                thetas.append(th)
        return Freund(l1, l2, *thetas)
    if cls in (MarshallOlkin, BlockBasu, Sarkar):
        return cls(l1, l2, rng.uniform(0.05, 3.0))
    if cls is Cowan:
        return Cowan(l1, l2, rng.uniform(0.1, math.pi))
    raise DomainError(f"no sampler for {cls!r}")


def linear_grid(t_min: float, t_max: float, steps: int) -> List[float]:
    if steps < 2 or not t_min < t_max:
        raise DomainError("grid needs t_min < t_max and at least 2 steps")
    return [t_min + (t_max - t_min) * i / (steps - 1) for i in range(steps)]
