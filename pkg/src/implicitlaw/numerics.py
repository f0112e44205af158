"""Numerical kernels: monotone root solving, adaptive Simpson, erf, splitmix64."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import MaxDepth, MaxIterations, NoBracket

__all__ = [
    "Bracket",
    "Tolerances",
    "RngState",
    "solve_monotone",
    "integrate_adaptive",
    "erf",
    "erfc",
    "next_uniform",
]

RealFn = Callable[[float], float]


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"bracket endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, t: float) -> bool:
        return self.lo <= t <= self.hi


@dataclass(frozen=True)
class Tolerances:
    root_abs: float = 1e-12
    quad_abs: float = 1e-9
    max_iter: int = 200
    max_quad_depth: int = 60

    def __post_init__(self):
        for name in ("root_abs", "quad_abs", "max_iter", "max_quad_depth"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = Tolerances()


def solve_monotone(
    g: RealFn,
    dg: RealFn,
    target: float,
    bracket: Bracket,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Solve ``g(x) = target`` for x in *bracket*, g strictly monotone.

    Newton iteration from the bracket midpoint, safeguarded by bisection: a
    Newton iterate that leaves the current bracket, a derivative below 1e-14
    in magnitude, or a Newton step longer than half the step before last
    triggers a bisection step instead. The bracket shrinks every iteration
    and g is never evaluated outside the initial bracket.

    Raises
    ------
    NoBracket
        If ``g(lo) - target`` and ``g(hi) - target`` do not straddle zero.
    MaxIterations
        If neither the residual nor the bracket-width criterion is met in
        ``tol.max_iter`` iterations.
    """
    lo, hi = bracket.lo, bracket.hi
    r_lo = g(lo) - target
    if r_lo == 0.0:
        return lo
    r_hi = g(hi) - target
    if r_hi == 0.0:
        return hi
    if not (r_lo * r_hi < 0.0):
        raise NoBracket(
            f"target {target!r} not bracketed: g({lo!r})={r_lo + target!r}, g({hi!r})={r_hi + target!r}"
        )
    lo_negative = r_lo < 0.0

    x = 0.5 * (lo + hi)
    step_old = step = hi - lo
    best_x, best_r = (lo, abs(r_lo)) if abs(r_lo) <= abs(r_hi) else (hi, abs(r_hi))
    for _ in range(tol.max_iter):
        r = g(x) - target
        if abs(r) < best_r:
            best_x, best_r = x, abs(r)
        if abs(r) <= tol.root_abs:
            return x
        if (r < 0.0) == lo_negative:
            lo = x
        else:
            hi = x
        if hi - lo <= tol.root_abs * max(1.0, abs(x)):
            return best_x
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket is down to adjacent floats
            return best_x

        d = dg(x)
        x_new = x - r / d if abs(d) >= 1e-14 else math.nan
        if lo < x_new < hi and abs(x_new - x) <= 0.5 * abs(step_old):
            step_old, step = step, x_new - x
            x = x_new
        else:
            step_old, step = step, mid - x
            x = mid
    raise MaxIterations(f"no convergence within {tol.max_iter} iterations (target {target!r})")


def integrate_adaptive(
    g: RealFn,
    lo: float,
    hi: float,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Adaptive Simpson quadrature of g over [lo, hi] to absolute tol.quad_abs.

    A panel is accepted when ``|S_fine - S_coarse| <= 15 * local_tol``; the
    local tolerance halves with every split.

    Raises :class:`MaxDepth` when a panel still fails at depth
    ``tol.max_quad_depth`` (a jump or spike inside the interval).
    """
    if hi < lo:
        raise ValueError(f"integration requires lo <= hi, got [{lo}, {hi}]")
    if hi == lo:
        return 0.0
    f_lo, f_mid, f_hi = g(lo), g(0.5 * (lo + hi)), g(hi)
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    return _simpson(g, lo, hi, f_lo, f_mid, f_hi, whole, tol.quad_abs, 0, tol.max_quad_depth)


def _simpson(g, a, b, fa, fm, fb, whole, eps, depth, max_depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = g(lm), g(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    fine = left + right
    delta = fine - whole
    if abs(delta) <= 15.0 * eps:
        return fine + delta / 15.0
    if depth >= max_depth:
        raise MaxDepth(f"quadrature did not converge on [{a!r}, {b!r}] at depth {depth}")
    return _simpson(g, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, max_depth) + _simpson(
        g, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, max_depth
    )


# ---------------------------------------------------------------------------
# error function

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def _erf_series(x: float) -> float:
    # erf x = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1*3*...*(2n+1)); all terms positive
    x2 = x * x
    term = x
    total = x
    n = 0
    while True:
        n += 1
        term *= 2.0 * x2 / (2 * n + 1)
        total += term
        if term <= 1e-17 * total:
            break
    return _TWO_OVER_SQRT_PI * math.exp(-x2) * total


def _erfc_cf(x: float) -> float:
    # erfc x = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0,
    # evaluated with the modified Lentz algorithm
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    for k in range(1, 500):
        a = 0.5 * k
        d = x + a * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = x + a / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return _INV_SQRT_PI * math.exp(-x * x) / f


def erf(x: float) -> float:
    """Error function, absolute error below 1e-10 (in practice ~1e-16).

    Series for ``|x| <= 2``, continued fraction for the complement beyond.
    ``erf(-x) == -erf(x)`` holds exactly.
    """
    if math.isnan(x):
        return math.nan
    ax = abs(x)
    if ax <= 2.0:
        v = _erf_series(ax)
    elif ax > 6.5:
        v = 1.0
    else:
        v = 1.0 - _erfc_cf(ax)
    return -v if x < 0 else v


def erfc(x: float) -> float:
    """Complementary error function ``1 - erf(x)``, accurate in the right tail."""
    if math.isnan(x):
        return math.nan
    if x > 2.0:
        return _erfc_cf(x) if x < 27.3 else 0.0
    if x < -2.0:
        return 2.0 - (_erfc_cf(-x) if x > -27.3 else 0.0)
    return 1.0 - erf(x)


# ---------------------------------------------------------------------------
# random numbers

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO_M53 = 2.0 ** -53


class RngState:
    """splitmix64 generator state; the stream is a pure function of the seed."""

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK64

    def __repr__(self):
        return f"RngState(state={self.state:#018x})"

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN_GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self) -> float:
        u = (self.next_u64() >> 11) * _TWO_M53
        return u if u > 0.0 else _TWO_M53


def next_uniform(rng: RngState) -> float:
    """Advance *rng* and return a draw strictly inside (0, 1)."""
    return rng.next_uniform()
