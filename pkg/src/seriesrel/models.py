"""The nine joint lifetime models of a two-component system.

Each model is a frozen dataclass validated at construction, so every
downstream kernel may assume its parameters are admissible. The joint
survival function ``P(X1 > x1, X2 > x2)`` is available through
:func:`joint_survival`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, fields
from typing import ClassVar, Dict, Type

from .exceptions import DomainError

__all__ = [
    "ModelParams",
    "Independent",
    "GumbelI",
    "GumbelII",
    "GumbelIII",
    "Freund",
    "MarshallOlkin",
    "BlockBasu",
    "Cowan",
    "Sarkar",
    "DerivedRates",
    "MODELS",
    "validate",
    "derived_rates",
    "joint_survival",
    "from_dict",
    "to_dict",
]

PARAM_FIELDS = ("lambda1", "lambda2", "lambda12", "alpha", "m", "theta", "theta1", "theta2")


def _check_finite(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite number, got {value!r}")


def _check_rate(model: str, name: str, value: float) -> None:
    _check_finite(name, value)
    if value <= 0:
        raise DomainError(f"{model} {name} must be > 0, got {value!r}")


def _log1mexp(y: float) -> float:
    """log(1 - exp(-y)) for y > 0, accurate at both ends."""
    if y < 0.6931471805599453:
        return math.log(-math.expm1(-y))
    return math.log1p(-math.exp(-y))


def _pnorm(a: float, b: float, m: float) -> float:
    """(a**m + b**m)**(1/m) for a, b >= 0 without overflow."""
    if m == 1:
        return a + b
    hi, lo = (a, b) if a >= b else (b, a)
    if hi == 0:
        return 0.0
    return hi * (1.0 + (lo / hi) ** m) ** (1.0 / m)


@dataclass(frozen=True)
class ModelParams:
    """Common base: the two marginal rates shared by every model."""

    lambda1: float
    lambda2: float

    name: ClassVar[str] = ""

    def __post_init__(self) -> None:
        for f in fields(self):
            _check_finite(f.name, getattr(self, f.name))
        _check_rate(type(self).__name__, "lambda1", self.lambda1)
        _check_rate(type(self).__name__, "lambda2", self.lambda2)
        self._check()

    def _check(self) -> None:
        pass

    @property
    def lam(self) -> float:
        """Total rate lambda1 + lambda2."""
        return self.lambda1 + self.lambda2

    def independent(self) -> "Independent":
        """The independence comparator with the same marginal rates."""
        return Independent(self.lambda1, self.lambda2)

    def _joint(self, x1: float, x2: float) -> float:  # pragma: no cover
        raise NotImplementedError


@dataclass(frozen=True)
class Independent(ModelParams):
    name: ClassVar[str] = "independent"

    def _joint(self, x1, x2):
        return math.exp(-self.lambda1 * x1 - self.lambda2 * x2)


@dataclass(frozen=True)
class GumbelI(ModelParams):
    lambda12: float = 0.0
    name: ClassVar[str] = "gumbel1"

    def _check(self):
        if self.lambda12 < 0:
            raise DomainError(f"GumbelI lambda12 must be >= 0, got {self.lambda12!r}")
        if self.lambda12 > self.lambda1 * self.lambda2:
            raise DomainError(
                f"GumbelI lambda12 must satisfy 0 <= lambda12 <= lambda1*lambda2 "
                f"= {self.lambda1 * self.lambda2!r}, got {self.lambda12!r}"
            )

    def _joint(self, x1, x2):
        return math.exp(-self.lambda1 * x1 - self.lambda2 * x2 - self.lambda12 * x1 * x2)


@dataclass(frozen=True)
class GumbelII(ModelParams):
    alpha: float = 0.0
    name: ClassVar[str] = "gumbel2"

    def _check(self):
        if not -1 < self.alpha < 1:
            raise DomainError(f"GumbelII alpha out of (-1, 1): got {self.alpha!r}")

    def _joint(self, x1, x2):
        u1 = -math.expm1(-self.lambda1 * x1)
        u2 = -math.expm1(-self.lambda2 * x2)
        return (1.0 + self.alpha * u1 * u2) * math.exp(-self.lambda1 * x1 - self.lambda2 * x2)


@dataclass(frozen=True)
class GumbelIII(ModelParams):
    m: float = 1.0
    name: ClassVar[str] = "gumbel3"

    def _check(self):
        if self.m < 1:
            raise DomainError(f"GumbelIII m must be >= 1, got {self.m!r}")

    def _joint(self, x1, x2):
        return math.exp(-_pnorm(self.lambda1 * x1, self.lambda2 * x2, self.m))


@dataclass(frozen=True)
class Freund(ModelParams):
    theta1: float = 1.0
    theta2: float = 1.0
    name: ClassVar[str] = "freund"

    def _check(self):
        _check_rate("Freund", "theta1", self.theta1)
        _check_rate("Freund", "theta2", self.theta2)
        lam = self.lam
        # the joint survival has lambda - theta_i in a denominator
        for nm, th in (("theta1", self.theta1), ("theta2", self.theta2)):
            if th == lam:
                raise DomainError(
                    f"Freund {nm} must differ from lambda1 + lambda2 = {lam!r}"
                )

    def _joint(self, x1, x2):
        lam = self.lam
        if x1 <= x2:
            d = lam - self.theta2
            return (
                self.lambda1 / d * math.exp(-d * x1 - self.theta2 * x2)
                + (self.lambda2 - self.theta2) / d * math.exp(-lam * x2)
            )
        d = lam - self.theta1
        return (
            self.lambda2 / d * math.exp(-d * x2 - self.theta1 * x1)
            + (self.lambda1 - self.theta1) / d * math.exp(-lam * x1)
        )


@dataclass(frozen=True)
class MarshallOlkin(ModelParams):
    lambda12: float = 1.0
    name: ClassVar[str] = "marshall-olkin"

    def _check(self):
        _check_rate("MarshallOlkin", "lambda12", self.lambda12)

    def _joint(self, x1, x2):
        return math.exp(-self.lambda1 * x1 - self.lambda2 * x2 - self.lambda12 * max(x1, x2))


@dataclass(frozen=True)
class BlockBasu(ModelParams):
    lambda12: float = 0.0
    name: ClassVar[str] = "block-basu"

    def _check(self):
        if self.lambda12 < 0:
            raise DomainError(f"BlockBasu lambda12 must be >= 0, got {self.lambda12!r}")

    def _joint(self, x1, x2):
        lam = self.lam
        lam_star = lam + self.lambda12
        xm = max(x1, x2)
        return (
            lam_star / lam * math.exp(-self.lambda1 * x1 - self.lambda2 * x2 - self.lambda12 * xm)
            - self.lambda12 / lam * math.exp(-lam_star * xm)
        )


@dataclass(frozen=True)
class Cowan(ModelParams):
    theta: float = math.pi
    name: ClassVar[str] = "cowan"

    def _check(self):
        if not 0 < self.theta <= math.pi:
            raise DomainError(f"Cowan theta out of (0, pi]: got {self.theta!r}")

    def _joint(self, x1, x2):
        a, b = self.lambda1 * x1, self.lambda2 * x2
        s = math.sin(0.5 * self.theta)
        # a^2 + b^2 - 2ab cos(theta) rewritten without cancellation
        radical = math.sqrt((a - b) ** 2 + 4.0 * a * b * s * s)
        return math.exp(-0.5 * (a + b + radical))


@dataclass(frozen=True)
class Sarkar(ModelParams):
    lambda12: float = 1.0
    name: ClassVar[str] = "sarkar"

    def _check(self):
        _check_rate("Sarkar", "lambda12", self.lambda12)

    @property
    def nu(self) -> float:
        return self.lambda12 / self.lam

    def _joint(self, x1, x2):
        nu = self.nu
        if x1 < x2:
            lead, rate, upper, lower = x2, self.lambda2, x2, x1
            inner = self.lambda1
        else:
            lead, rate, upper, lower = x1, self.lambda1, x1, x2
            inner = self.lambda2
        prefactor = math.exp(-(rate + self.lambda12) * lead)
        if lower == 0:
            return prefactor
        # 1 - (1-e^{-inner*upper})^{-nu} (1-e^{-inner*lower})^{1+nu}, via logs
        log_u = _log1mexp(inner * upper)
        log_v = _log1mexp(inner * lower)
        return prefactor * -math.expm1(-nu * log_u + (1.0 + nu) * log_v)


MODELS: Dict[str, Type[ModelParams]] = {
    cls.name: cls
    for cls in (
        Independent,
        GumbelI,
        GumbelII,
        GumbelIII,
        Freund,
        MarshallOlkin,
        BlockBasu,
        Cowan,
        Sarkar,
    )
}


@dataclass(frozen=True)
class DerivedRates:
    """Rates built from the model parameters.

    Parameters a model does not carry take their neutral value
    (lambda12 = 0, m = 1, theta = pi), so every field is always defined.
    """

    lambda_: float
    lambda_star: float
    lambda3: float
    alpha_star: float


def validate(params: ModelParams) -> ModelParams:
    """Re-check every constraint of ``params`` and return it unchanged."""
    if not isinstance(params, ModelParams) or type(params) is ModelParams:
        raise DomainError(f"not a lifetime model: {params!r}")
    params.__post_init__()
    return params


@functools.lru_cache(maxsize=4096)
def derived_rates(params: ModelParams) -> DerivedRates:
    l1, l2 = params.lambda1, params.lambda2
    lam = l1 + l2
    lambda12 = getattr(params, "lambda12", 0.0)
    m = getattr(params, "m", 1.0)
    theta = params.theta if isinstance(params, Cowan) else math.pi
    s = math.sin(0.5 * theta)
    return DerivedRates(
        lambda_=lam,
        lambda_star=lam + lambda12,
        lambda3=_pnorm(l1, l2, m),
        alpha_star=lam + math.sqrt((l1 - l2) ** 2 + 4.0 * l1 * l2 * s * s),
    )


def joint_survival(params: ModelParams, x1: float, x2: float) -> float:
    """P(X1 > x1, X2 > x2) for x1, x2 >= 0."""
    for nm, x in (("x1", x1), ("x2", x2)):
        if not (x >= 0) or math.isinf(x):
            raise DomainError(f"{nm} must be a finite time >= 0, got {x!r}")
    return params._joint(float(x1), float(x2))


def from_dict(doc: dict) -> ModelParams:
    """Build a model from ``{"model": "<name>", "lambda1": ..., ...}``."""
    if not isinstance(doc, dict):
        raise DomainError("model spec must be a JSON object")
    unknown = set(doc) - {"model", *PARAM_FIELDS}
    if unknown:
        raise DomainError(f"unknown model fields: {', '.join(sorted(unknown))}")
    name = doc.get("model")
    if name not in MODELS:
        raise DomainError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    cls = MODELS[name]
    wanted = [f.name for f in fields(cls)]
    extra = set(doc) - {"model", *wanted}
    if extra:
        raise DomainError(f"model {name!r} does not take: {', '.join(sorted(extra))}")
    missing = [f for f in wanted if f not in doc]
    if missing:
        raise DomainError(f"model {name!r} is missing: {', '.join(missing)}")
    return cls(**{f: doc[f] for f in wanted})


def to_dict(params: ModelParams) -> dict:
    out = {"model": params.name}
    out.update({f.name: getattr(params, f.name) for f in fields(params)})
    return out
