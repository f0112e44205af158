"""Laws for the source variable A: uniform, exponential, normal and custom pdf."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import expr as _expr
from .errors import DomainError, SpecError
from .numerics import (
    DEFAULT_TOL,
    Bracket,
    RngState,
    erfc,
    integrate_adaptive,
    solve_monotone,
)

__all__ = [
    "SourceDistribution",
    "Uniform",
    "Exponential",
    "Normal",
    "Custom",
    "from_spec",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile requires 0 < p < 1, got {p!r}")


class SourceDistribution(ABC):
    """A continuous law on the real line."""

    @abstractmethod
    def pdf(self, a: float) -> float:
        """Density at *a*; exactly 0 outside the (closed) support."""

    @abstractmethod
    def cdf(self, a: float) -> float:
        ...

    @abstractmethod
    def quantile(self, p: float) -> float:
        ...

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]:
        """Closed support interval; endpoints may be infinite."""

    @property
    @abstractmethod
    def effective_support(self) -> tuple[float, float]:
        """Finite interval carrying all but a negligible mass, for quadrature."""

    @abstractmethod
    def to_spec(self) -> dict[str, Any]:
        ...

    def sample(self, rng: RngState) -> float:
        """Inverse-transform draw; advances *rng* by exactly one step."""
        return self.quantile(rng.next_uniform())

    def mass_between(self, lo: float, hi: float) -> float:
        """P(lo <= A <= hi)."""
        if hi <= lo:
            return 0.0
        return self.cdf(hi) - self.cdf(lo)


@dataclass(frozen=True)
class Uniform(SourceDistribution):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"uniform requires finite a < b, got ({self.a}, {self.b})")

    def pdf(self, a: float) -> float:
        return 1.0 / (self.b - self.a) if self.a <= a <= self.b else 0.0

    def cdf(self, a: float) -> float:
        if a <= self.a:
            return 0.0
        if a >= self.b:
            return 1.0
        return (a - self.a) / (self.b - self.a)

    def quantile(self, p: float) -> float:
        _check_probability(p)
        return self.a + p * (self.b - self.a)

    @property
    def support(self):
        return (self.a, self.b)

    @property
    def effective_support(self):
        return (self.a, self.b)

    def to_spec(self):
        return {"kind": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Exponential(SourceDistribution):
    rate: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"exponential requires rate > 0, got {self.rate}")

    def pdf(self, a: float) -> float:
        return self.rate * math.exp(-self.rate * a) if a >= 0.0 else 0.0

    def cdf(self, a: float) -> float:
        return -math.expm1(-self.rate * a) if a > 0.0 else 0.0

    def quantile(self, p: float) -> float:
        _check_probability(p)
        return -math.log1p(-p) / self.rate

    @property
    def support(self):
        return (0.0, math.inf)

    @property
    def effective_support(self):
        return (0.0, self.quantile(1.0 - 1e-12))

    def to_spec(self):
        return {"kind": "exponential", "rate": self.rate}


# Acklam's rational approximation to the standard normal quantile
_ACKLAM_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
             1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_ACKLAM_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
             6.680131188771972e01, -1.328068155288572e01)
_ACKLAM_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
             -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_ACKLAM_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
             3.754408661907416e00)
_ACKLAM_PLOW = 0.02425


def _acklam(p: float) -> float:
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    if p < _ACKLAM_PLOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if p > 1.0 - _ACKLAM_PLOW:
        q = math.sqrt(-2.0 * math.log1p(-p))
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    q = p - 0.5
    r = q * q
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
        ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
    )


def std_normal_cdf(z: float) -> float:
    return 0.5 * erfc(-z / _SQRT2)


def std_normal_quantile(p: float) -> float:
    _check_probability(p)
    z = _acklam(p)
    # one Newton step polishes the ~1e-9 relative rational approximation
    density = _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    if density > 0.0:
        z -= (std_normal_cdf(z) - p) / density
    return z


@dataclass(frozen=True)
class Normal(SourceDistribution):
    mean: float = 0.0
    stddev: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.stddev) and self.stddev > 0):
            raise DomainError(f"normal requires finite mean and stddev > 0, got ({self.mean}, {self.stddev})")

    def pdf(self, a: float) -> float:
        z = (a - self.mean) / self.stddev
        return _INV_SQRT_2PI * math.exp(-0.5 * z * z) / self.stddev

    def cdf(self, a: float) -> float:
        return std_normal_cdf((a - self.mean) / self.stddev)

    def quantile(self, p: float) -> float:
        return self.mean + self.stddev * std_normal_quantile(p)

    @property
    def support(self):
        return (-math.inf, math.inf)

    @property
    def effective_support(self):
        return (self.mean - 8.0 * self.stddev, self.mean + 8.0 * self.stddev)

    def to_spec(self):
        return {"kind": "normal", "mean": self.mean, "stddev": self.stddev}


@dataclass(frozen=True)
class Custom(SourceDistribution):
    """Law given by a density expression on a finite interval.

    The density must be nonnegative on a 4097-node grid over the support and
    integrate to 1 within 1e-6; it is not rescaled.
    """

    pdf_expr: _expr.ExprNode
    lo: float
    hi: float
    _fn: Callable[[float], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise DomainError(f"custom support must be finite with lo < hi, got ({self.lo}, {self.hi})")
        object.__setattr__(self, "_fn", _expr.compile_expr(self.pdf_expr))
        grid = np.linspace(self.lo, self.hi, 4097)
        values = _expr.evaluate(self.pdf_expr, grid)
        bad = ~np.isfinite(values) | (values < 0.0)
        if bad.any():
            t = float(grid[np.argmax(bad)])
            raise DomainError(f"custom pdf is negative or non-finite at t={t!r}")
        total = integrate_adaptive(self._fn, self.lo, self.hi)
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"custom pdf integrates to {total!r}, not 1")

    def pdf(self, a: float) -> float:
        return self._fn(a) if self.lo <= a <= self.hi else 0.0

    def cdf(self, a: float) -> float:
        if a <= self.lo:
            return 0.0
        if a >= self.hi:
            return 1.0
        return min(1.0, max(0.0, integrate_adaptive(self._fn, self.lo, a)))

    def quantile(self, p: float) -> float:
        _check_probability(p)
        return solve_monotone(self.cdf, self.pdf, p, Bracket(self.lo, self.hi), DEFAULT_TOL)

    @property
    def support(self):
        return (self.lo, self.hi)

    @property
    def effective_support(self):
        return (self.lo, self.hi)

    def to_spec(self):
        return {"kind": "custom", "pdf": _expr.to_text(self.pdf_expr), "lo": self.lo, "hi": self.hi}


def _number(obj: dict, key: str) -> float:
    if key not in obj:
        raise SpecError(f"distribution spec missing {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"distribution field {key!r} must be a number, got {value!r}")
    return float(value)


def from_spec(obj: dict) -> SourceDistribution:
    """Build a distribution from its spec object, e.g. ``{"kind": "exponential", "rate": 0.1}``.

    Raises :class:`SpecError` for malformed objects and :class:`DomainError`
    for invalid parameters.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError(f"distribution spec must be an object with a 'kind', got {obj!r}")
    kind = obj["kind"]
    if kind == "uniform":
        return Uniform(_number(obj, "a"), _number(obj, "b"))
    if kind == "exponential":
        return Exponential(_number(obj, "rate"))
    if kind == "normal":
        return Normal(_number(obj, "mean"), _number(obj, "stddev"))
    if kind == "custom":
        source = obj.get("pdf")
        if not isinstance(source, str):
            raise SpecError("custom distribution needs a 'pdf' expression string")
        return Custom(_expr.parse(source), _number(obj, "lo"), _number(obj, "hi"))
    raise SpecError(f"unknown distribution kind {kind!r}")
