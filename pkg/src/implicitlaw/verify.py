"""Numerical checks that a derived law is a genuine, self-consistent density."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from .errors import EmptyInput
from .numerics import RngState, integrate_adaptive
from .transform import ImplicitDensity

__all__ = [
    "VerificationReport",
    "check_normalization",
    "ks_distance",
    "ks_critical",
    "cdf_pdf_consistency",
    "run_full_verification",
    "NORMALIZATION_TOL",
    "CONSISTENCY_TOL",
]

NORMALIZATION_TOL = 1e-6
CONSISTENCY_TOL = 1e-4
KS_COEFFICIENT = 1.63  # asymptotic critical value at alpha = 0.01
FD_STEP = 1e-5


@dataclass(frozen=True)
class VerificationReport:
    normalization_integral: float
    normalization_pass: bool
    ks_statistic: float
    ks_critical: float
    ks_pass: bool
    max_cdf_pdf_deviation: float
    consistency_pass: bool
    n_samples: int
    seed: int

    @property
    def all_pass(self) -> bool:
        return self.normalization_pass and self.ks_pass and self.consistency_pass

    def as_dict(self) -> dict:
        return asdict(self)


def check_normalization(d: ImplicitDensity, tol: float = NORMALIZATION_TOL) -> tuple[float, bool]:
    """Integrate the density over its support and compare with the mass of A
    carried by f(domain)."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    s = d.support()
    integral = integrate_adaptive(d.pdf, s.lo, s.hi)
    return integral, abs(integral - d.transported_mass) <= tol


def ks_distance(samples: Sequence[float], cdf: Callable[[float], float]) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic of sorted *samples*."""
    n = len(samples)
    if n == 0:
        raise EmptyInput("ks_distance needs at least one sample")
    worst = 0.0
    prev = -math.inf
    for i, x in enumerate(samples, start=1):
        if x < prev:
            raise ValueError("samples must be sorted ascending")
        prev = x
        c = cdf(x)
        worst = max(worst, abs(i / n - c), abs((i - 1) / n - c))
    return worst


def ks_critical(n: int) -> float:
    return KS_COEFFICIENT / math.sqrt(n)


def cdf_pdf_consistency(
    d: ImplicitDensity,
    grid_points: int = 101,
    lo: float | None = None,
    hi: float | None = None,
) -> float:
    """Max |central difference of cdf - pdf| over interior grid nodes.

    The grid defaults to the support of *d*. Nodes within ten steps of a
    support endpoint are skipped since the density may jump there.
    """
    if grid_points < 16:
        raise ValueError(f"grid_points must be at least 16, got {grid_points}")
    s = d.support()
    lo = s.lo if lo is None else lo
    hi = s.hi if hi is None else hi
    h = FD_STEP
    band = 10.0 * h
    worst = 0.0
    for i in range(1, grid_points - 1):
        t = lo + (hi - lo) * i / (grid_points - 1)
        if abs(t - s.lo) <= band or abs(t - s.hi) <= band:
            continue
        fd = (d.cdf(t + h) - d.cdf(t - h)) / (2.0 * h)
        worst = max(worst, abs(fd - d.pdf(t)))
    return worst


def run_full_verification(d: ImplicitDensity, n_samples: int = 100_000, seed: int = 42) -> VerificationReport:
    """Normalization, KS goodness of fit of seeded samples, and cdf/pdf consistency."""
    if n_samples < 1000:
        raise ValueError(f"n_samples must be at least 1000, got {n_samples}")
    integral, norm_ok = check_normalization(d)
    xs = sorted(d.samples(n_samples, RngState(seed)))
    ks = ks_distance(xs, d.cdf)
    crit = ks_critical(n_samples)
    dev = cdf_pdf_consistency(d)
    return VerificationReport(
        normalization_integral=integral,
        normalization_pass=norm_ok,
        ks_statistic=ks,
        ks_critical=crit,
        ks_pass=ks <= crit,
        max_cdf_pdf_deviation=dev,
        consistency_pass=dev <= CONSISTENCY_TOL,
        n_samples=n_samples,
        seed=seed,
    )
