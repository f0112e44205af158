"""Problem spec files and the built-in worked examples.

A spec file is a JSON object::

    {"f": "t^5 + t", "domain": [-2, 2], "A": {"kind": "uniform", "a": 0, "b": 1},
     "grid": [lo, hi, n]}          # "grid" is optional
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import expr as _expr
from .distributions import Exponential, Normal, SourceDistribution, Uniform, from_spec
from .errors import NumericalError, SpecError
from .numerics import Bracket
from .transform import ImplicitDensity

__all__ = ["Grid", "GridSeries", "ProblemSpec", "load_spec", "parse_grid", "PRESETS", "FIGURE_GRIDS"]


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise SpecError(f"grid needs finite lo < hi, got {self.lo}:{self.hi}")
        if self.n < 1:
            raise SpecError(f"grid needs n >= 1 intervals, got {self.n}")

    def points(self) -> list[float]:
        """The n + 1 nodes, endpoints exact."""
        step = self.hi - self.lo
        return [self.lo + step * i / self.n if i < self.n else self.hi for i in range(self.n + 1)]


def parse_grid(text: str) -> Grid:
    """Parse ``LO:HI:N``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise SpecError(f"grid must look like LO:HI:N, got {text!r}")
    try:
        return Grid(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise SpecError(f"bad grid {text!r}: {exc}") from None


@dataclass(frozen=True)
class GridSeries:
    name: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("grid t values must be strictly increasing")
        if not all(math.isfinite(v) for _, v in self.points):
            raise NumericalError(f"non-finite {self.name} value in series")

    def to_csv(self) -> str:
        lines = [f"t,{self.name}"]
        lines += [f"{t:.17g},{v:.17g}" for t, v in self.points]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProblemSpec:
    f_source: str
    domain: Bracket
    source: SourceDistribution
    grid: Grid | None = None

    def build(self) -> ImplicitDensity:
        return ImplicitDensity.build(_expr.parse(self.f_source), self.domain, self.source)

    @classmethod
    def from_dict(cls, obj: Any) -> "ProblemSpec":
        if not isinstance(obj, dict):
            raise SpecError("spec must be a JSON object")
        for key in ("f", "domain", "A"):
            if key not in obj:
                raise SpecError(f"spec missing {key!r}")
        f_source = obj["f"]
        if not isinstance(f_source, str):
            raise SpecError("'f' must be an expression string")
        _expr.parse(f_source)
        domain = obj["domain"]
        if not (isinstance(domain, list) and len(domain) == 2):
            raise SpecError("'domain' must be [lo, hi]")
        try:
            bracket = Bracket(float(domain[0]), float(domain[1]))
        except (TypeError, ValueError) as exc:
            raise SpecError(f"bad domain {domain!r}: {exc}") from None
        grid = None
        if obj.get("grid") is not None:
            g = obj["grid"]
            if not (isinstance(g, list) and len(g) == 3):
                raise SpecError("'grid' must be [lo, hi, n]")
            try:
                grid = Grid(float(g[0]), float(g[1]), int(g[2]))
            except (TypeError, ValueError) as exc:
                raise SpecError(f"bad grid {g!r}: {exc}") from None
        return cls(f_source, bracket, from_spec(obj["A"]), grid)

    def to_dict(self) -> dict:
        out = {"f": self.f_source, "domain": [self.domain.lo, self.domain.hi], "A": self.source.to_spec()}
        if self.grid is not None:
            out["grid"] = [self.grid.lo, self.grid.hi, self.grid.n]
        return out


def load_spec(path: str | Path) -> ProblemSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path} is not valid JSON: {exc}") from None
    return ProblemSpec.from_dict(obj)


# Built-in worked examples. The exponential case needs a wider domain so that
# f(domain) carries all but ~2e-11 of the source mass.
PRESETS: dict[int, ProblemSpec] = {
    1: ProblemSpec("t^5 + t", Bracket(-2.0, 2.0), Uniform(0.0, 1.0)),
    2: ProblemSpec("t^5 + t", Bracket(-3.0, 3.0), Exponential(0.1)),
    3: ProblemSpec("t + .9*sin(t)", Bracket(-10.0, 10.0), Uniform(0.0, 1.0)),
    4: ProblemSpec("t^5 + t", Bracket(-2.0, 2.0), Normal(0.0, 1.0)),
}

FIGURE_GRIDS: dict[int, Grid] = {
    1: Grid(-0.1, 0.85, 500),
    2: Grid(0.0, 3.0, 500),
    3: Grid(-0.1, 0.7, 500),
    4: Grid(-2.0, 2.0, 500),
}
