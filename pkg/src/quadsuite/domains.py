"""Geometric plumbing: interval sets, rotated frames, sampled grid functions.

These are the small value types the numerical routines pass around.  All
grids are uniform; an axis is described by (lo, hi, step) with the number
of points inferred as round((hi - lo)/step) + 1, which keeps endpoints
exact instead of accumulating floating-point drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, DomainError

__all__ = [
    "IntervalSet",
    "RotatedFrame",
    "GridFunction",
    "uniform_axis",
    "load_grid2d",
    "save_grid2d",
]


def uniform_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Return the uniform grid lo, lo+step, ..., hi (endpoint included)."""
    if not (hi > lo and step > 0):
        raise DomainError(f"bad axis spec ({lo}, {hi}, {step})")
    n = round((hi - lo) / step)
    if n < 1 or abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        raise DomainError(f"step {step} does not divide [{lo}, {hi}]")
    return lo + step * np.arange(n + 1)


@dataclass(frozen=True)
class IntervalSet:
    """A finite union of disjoint open-ended intervals on the real line.

    Endpoints may be infinite; ``IntervalSet.full_line()`` is the sentinel
    for the whole axis.  The constructor sorts the pieces and rejects
    overlapping ones.
    """

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pieces = sorted((float(a), float(b)) for a, b in self.intervals)
        if not pieces:
            raise DomainError("interval set must contain at least one interval")
        for a, b in pieces:
            if math.isnan(a) or math.isnan(b) or not a < b:
                raise DomainError(f"invalid interval ({a}, {b})")
        for (_, b0), (a1, _) in zip(pieces, pieces[1:]):
            if a1 < b0:
                raise DomainError("intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", tuple(pieces))

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> "IntervalSet":
        return cls(tuple(pairs))

    @classmethod
    def full_line(cls) -> "IntervalSet":
        return cls(((-math.inf, math.inf),))

    def lebesgue(self) -> float:
        return sum(b - a for a, b in self.intervals)

    @property
    def is_bounded(self) -> bool:
        return all(math.isfinite(a) and math.isfinite(b) for a, b in self.intervals)

    def indicator(self, x: np.ndarray) -> np.ndarray:
        """1.0 where x lies in the set, 0.0 elsewhere (half-open [a, b))."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b in self.intervals:
            out = np.where((x >= a) & (x < b), 1.0, out)
        return out

    def clipped(self, lo: float, hi: float) -> list[tuple[float, float]]:
        """Intersection with [lo, hi] as a list of finite intervals."""
        out = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 < b2:
                out.append((a2, b2))
        return out


@dataclass(frozen=True)
class RotatedFrame:
    """Orthonormal frame (e1, e2) obtained by rotating the (q, p) axes."""

    theta: float

    @property
    def e1(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def e2(self) -> tuple[float, float]:
        return (-math.sin(self.theta), math.cos(self.theta))

    def project(self, q, p):
        """Coordinate of (q, p) along e1, i.e. the rotated quadrature value."""
        c, s = self.e1
        return q * c + p * s

    def point(self, t, s):
        """Plane point with rotated coordinates (t, s)."""
        c, sn = self.e1
        return (t * c - s * sn, t * sn + s * c)


@dataclass
class GridFunction:
    """Real scalar samples on a uniform 1D or 2D grid.

    For 2D data ``values[i, j]`` is the sample at (q_i, p_j): rows run over
    the first axis.
    """

    axes: tuple[tuple[float, float, float], ...]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if len(self.axes) not in (1, 2):
            raise DomainError("grid functions are one- or two-dimensional")
        shape = tuple(len(uniform_axis(*ax)) for ax in self.axes)
        if self.values.shape != shape:
            raise DomainError(
                f"values shape {self.values.shape} does not match axes {shape}"
            )

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def axis_points(self, i: int = 0) -> np.ndarray:
        return uniform_axis(*self.axes[i])

    @classmethod
    def sample2d(cls, fn, q_axis, p_axis, meta=None) -> "GridFunction":
        """Tabulate ``fn(q, p)`` (vectorized over broadcast grids)."""
        qs = uniform_axis(*q_axis)
        ps = uniform_axis(*p_axis)
        vals = fn(qs[:, None], ps[None, :])
        return cls((tuple(q_axis), tuple(p_axis)), np.asarray(vals, float),
                   meta=dict(meta or {}))

    def boundary_max(self) -> float:
        """Largest absolute sample on the outer frame of the grid."""
        v = self.values
        if self.ndim == 1:
            return max(abs(v[0]), abs(v[-1]))
        return max(
            float(np.max(np.abs(v[0, :]))),
            float(np.max(np.abs(v[-1, :]))),
            float(np.max(np.abs(v[:, 0]))),
            float(np.max(np.abs(v[:, -1]))),
        )

    def require_decayed(self, tol: float = 1e-12) -> None:
        """Raise CoverageError unless the boundary frame is below tol."""
        worst = self.boundary_max()
        if worst > tol:
            raise CoverageError(
                f"grid boundary reaches {worst:.3e} > {tol:.1e}; enlarge the grid"
            )


def save_grid2d(grid: GridFunction, path) -> None:
    """Write a 2D grid in the plain-text dump format.

    Header line ``# q_min q_max p_min p_max step`` followed by one row of
    samples per q value.  Both axes must share the same step.
    """
    if grid.ndim != 2:
        raise DomainError("save_grid2d needs a 2D grid")
    (q0, q1, hq), (p0, p1, hp) = grid.axes
    if abs(hq - hp) > 1e-15:
        raise DomainError("dump format requires equal steps on both axes")
    with open(path, "w") as fh:
        fh.write(f"# {q0:.12e} {q1:.12e} {p0:.12e} {p1:.12e} {hq:.12e}\n")
        for row in grid.values:
            fh.write(" ".join(f"{v:.12e}" for v in row) + "\n")


def load_grid2d(path) -> GridFunction:
    """Read a 2D grid written by :func:`save_grid2d`."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DomainError("missing grid header line")
        try:
            q0, q1, p0, p1, h = (float(tok) for tok in header[1:].split())
        except ValueError as exc:
            raise DomainError(f"malformed grid header: {header!r}") from exc
        values = np.loadtxt(fh, ndmin=2)
    return GridFunction(((q0, q1, h), (p0, p1, h)), values)
