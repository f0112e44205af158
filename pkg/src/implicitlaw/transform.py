"""Law of X defined implicitly by f(X) = A for strictly monotone C1 f.

For increasing f, ``P(X <= t) = P(A <= f(t))``; for decreasing f the event
flips and ``P(X <= t) = 1 - F_A(f(t))``. Either way the density is
``f_A(f(t)) * |f'(t)|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import expr as _expr
from .distributions import SourceDistribution
from .errors import NonFinite, NotMonotone, SupportMismatch
from .numerics import DEFAULT_TOL, Bracket, RngState, Tolerances, solve_monotone

__all__ = [
    "MonotoneMap",
    "ImplicitDensity",
    "build_monotone_map",
    "MASS_TOL",
]

DEFAULT_GRID_POINTS = 4096
DERIVATIVE_ZERO = 1e-12
# mass of A allowed to fall outside f(domain) for a full-mass density
MASS_TOL = 1e-9


@dataclass(frozen=True)
class MonotoneMap:
    f: _expr.ExprNode
    df: _expr.ExprNode
    domain: Bracket
    increasing: bool
    derivative_floor: float
    _f: Callable[[float], float] = field(init=False, repr=False, compare=False)
    _df: Callable[[float], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_f", _expr.compile_expr(self.f))
        object.__setattr__(self, "_df", _expr.compile_expr(self.df))

    @property
    def direction(self) -> str:
        return "increasing" if self.increasing else "decreasing"

    def value(self, t: float) -> float:
        return self._f(t)

    def slope(self, t: float) -> float:
        return self._df(t)

    @property
    def image(self) -> tuple[float, float]:
        """f(domain) as an ordered interval."""
        a, b = self._f(self.domain.lo), self._f(self.domain.hi)
        return (a, b) if a <= b else (b, a)

    def invert(self, a: float, tol: Tolerances = DEFAULT_TOL) -> float:
        """The t in the domain with f(t) = a."""
        return solve_monotone(self._f, self._df, a, self.domain, tol)


def build_monotone_map(
    f_expr: _expr.ExprNode | str,
    domain: Bracket | tuple[float, float],
    grid_points: int = DEFAULT_GRID_POINTS,
) -> MonotoneMap:
    """Certify that *f_expr* is strictly monotone on *domain*.

    The symbolic derivative is sampled on ``grid_points + 1`` uniform nodes;
    every value must be finite, share one sign and exceed 1e-12 in
    magnitude. This cannot see oscillations between grid nodes.

    Raises
    ------
    NonFinite
        f or f' is nan/inf at some node.
    NotMonotone
        f' changes sign or vanishes at some node.
    """
    if isinstance(f_expr, str):
        f_expr = _expr.parse(f_expr)
    if not isinstance(domain, Bracket):
        domain = Bracket(*domain)
    if grid_points < 64:
        raise ValueError(f"grid_points must be at least 64, got {grid_points}")

    df = _expr.differentiate(f_expr)
    grid = np.linspace(domain.lo, domain.hi, grid_points + 1)
    fv = _expr.evaluate(f_expr, grid)
    dv = _expr.evaluate(df, grid)
    bad = ~(np.isfinite(fv) & np.isfinite(dv))
    if bad.any():
        raise NonFinite(float(grid[np.argmax(bad)]), "f or f' is not finite on the domain")

    flat = np.abs(dv) < DERIVATIVE_ZERO
    if flat.any():
        raise NotMonotone(float(grid[np.argmax(flat)]), "f' vanishes")
    signs = np.sign(dv)
    changed = signs != signs[0]
    if changed.any():
        raise NotMonotone(float(grid[np.argmax(changed)]), "f' changes sign")
    increasing = _expr.evaluate(df, domain.midpoint) > 0
    return MonotoneMap(f_expr, df, domain, bool(increasing), float(np.min(np.abs(dv))))


@dataclass(frozen=True)
class ImplicitDensity:
    """The law of X where ``map(X) = source``.

    With ``full_mass=True`` (the default) construction requires
    ``P(A in f(domain)) >= 1 - MASS_TOL`` so that every draw of A can be
    inverted. With ``full_mass=False`` only overlap of f(domain) with the
    source support is required; such a density carries the transported mass
    and cannot be sampled.
    """

    map: MonotoneMap
    source: SourceDistribution
    full_mass: bool = True
    x_support: Bracket = field(init=False)
    transported_mass: float = field(init=False)

    def __post_init__(self):
        img_lo, img_hi = self.map.image
        src_lo, src_hi = self.source.support
        lo, hi = max(img_lo, src_lo), min(img_hi, src_hi)
        if not lo < hi:
            raise SupportMismatch(
                f"f(domain) = [{img_lo!r}, {img_hi!r}] misses the source support [{src_lo!r}, {src_hi!r}]"
            )
        mass = self.source.mass_between(img_lo, img_hi)
        if self.full_mass and mass < 1.0 - MASS_TOL:
            raise SupportMismatch(
                f"f(domain) = [{img_lo!r}, {img_hi!r}] carries only {mass!r} of the source mass"
            )
        object.__setattr__(self, "transported_mass", mass)
        object.__setattr__(self, "x_support", self._solve_support(lo, hi, img_lo, img_hi))

    def _solve_support(self, lo, hi, img_lo, img_hi) -> Bracket:
        m = self.map
        dom = m.domain
        # image endpoints map straight back to domain endpoints
        t_img_lo, t_img_hi = (dom.lo, dom.hi) if m.increasing else (dom.hi, dom.lo)
        t_lo = t_img_lo if lo == img_lo else m.invert(lo)
        t_hi = t_img_hi if hi == img_hi else m.invert(hi)
        if not m.increasing:
            t_lo, t_hi = t_hi, t_lo
        return Bracket(t_lo, t_hi)

    @classmethod
    def build(
        cls,
        f: _expr.ExprNode | str,
        domain: Bracket | tuple[float, float],
        source: SourceDistribution,
        grid_points: int = DEFAULT_GRID_POINTS,
        full_mass: bool = True,
    ) -> "ImplicitDensity":
        return cls(build_monotone_map(f, domain, grid_points), source, full_mass)

    def support(self) -> Bracket:
        """Maximal subinterval of the domain where the density may be positive."""
        return self.x_support

    def pdf(self, t: float) -> float:
        dom = self.map.domain
        if not dom.lo <= t <= dom.hi:
            return 0.0
        return self.source.pdf(self.map.value(t)) * abs(self.map.slope(t))

    def cdf(self, t: float) -> float:
        dom = self.map.domain
        # outside the domain the cdf is constant at its boundary value
        tc = min(max(t, dom.lo), dom.hi)
        fa = self.source.cdf(self.map.value(tc))
        p = fa if self.map.increasing else 1.0 - fa
        return min(1.0, max(0.0, p))

    def quantile(self, p: float) -> float:
        """The t with ``cdf(t) = p``.

        Raises :class:`SupportMismatch` when the matching quantile of A lies
        outside f(domain).
        """
        target = self.source.quantile(p if self.map.increasing else 1.0 - p)
        img_lo, img_hi = self.map.image
        if not img_lo <= target <= img_hi:
            raise SupportMismatch(
                f"source quantile {target!r} for p={p!r} lies outside f(domain) = [{img_lo!r}, {img_hi!r}]"
            )
        return self.map.invert(target)

    def sample(self, rng: RngState) -> float:
        """Draw A and solve f(X) = A."""
        if not self.full_mass:
            raise SupportMismatch("sampling requires a full-mass density")
        return self.map.invert(self.source.sample(rng))

    def samples(self, n: int, rng: RngState) -> list[float]:
        return [self.sample(rng) for _ in range(n)]


def pdf_grid(d: ImplicitDensity, ts) -> list[float]:
    return [d.pdf(float(t)) for t in ts]


def cdf_grid(d: ImplicitDensity, ts) -> list[float]:
    return [d.cdf(float(t)) for t in ts]

