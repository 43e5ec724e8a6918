"""Grid certification of m-convexity and starshapedness.

A function g on [0, b] is m-convex when

    g(t*x + m*(1-t)*y) <= t*g(x) + m*(1-t)*g(y)

for all x, y in [0, b] and t in [0, 1]; m = 1 is ordinary convexity and
m = 0 reduces to starshapedness, g(t*x) <= t*g(x). The checks here sample the
inequality on a finite grid, so a positive answer is "certified on grid",
never a proof. Scans run x-outer, y-middle, t-inner and the reported witness
is the first violation in that order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .funlib import Function1D

CERTIFIED = "certifiedOnGrid"
VIOLATED = "violated"


@dataclass(frozen=True)
class ConvexityGrid:
    points: int = 101
    t_points: int = 101
    # None means 1e-12 * (1 + max |g| over the x grid)
    tolerance: Optional[float] = None

    def __post_init__(self):
        if self.points < 2 or self.t_points < 2:
            raise ValueError("grids need at least two points per axis")
        if self.tolerance is not None and self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    t: float
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "t": self.t,
                "lhs": self.lhs, "rhs": self.rhs, "gap": self.gap}


@dataclass(frozen=True)
class ConvexityReport:
    status: str
    m: float
    witness: Optional[Witness]
    samples: int
    tolerance: float
    worst: Optional[Witness] = None  # largest gap seen, even when certified

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "m": self.m,
            "witness": self.witness.to_dict() if self.witness else None,
            "samples": self.samples,
        }


def _vectorised(g) -> tuple[Callable, tuple]:
    if isinstance(g, Function1D):
        return g.value, g.domain
    return g, (-math.inf, math.inf)


def _prepare(g, b: float, grid: ConvexityGrid):
    if not b > 0:
        raise ValueError("b must be positive")
    fn, (lo, hi) = _vectorised(g)
    if lo > 0 or hi < b:
        raise DomainError(f"[0, {b}] is not inside the domain [{lo}, {hi}]")
    xs = np.linspace(0.0, b, grid.points)
    ts = np.linspace(0.0, 1.0, grid.t_points)
    gx = np.asarray(fn(xs), dtype=float)
    if not np.all(np.isfinite(gx)):
        raise DomainError("function is not finite on the grid")
    tol = grid.tolerance
    if tol is None:
        tol = 1e-12 * (1.0 + float(np.max(np.abs(gx))))
    return fn, xs, ts, gx, tol


def _eval_checked(fn, args):
    out = np.asarray(fn(args), dtype=float)
    if not np.all(np.isfinite(out)):
        raise DomainError("function is not finite at an interpolated point")
    return out


def check_m_convex(g, b: float, m: float,
                   grid: ConvexityGrid = ConvexityGrid()) -> ConvexityReport:
    """Sample the m-convexity inequality over [0, b]^2 x [0, 1].

    ``g`` is a :class:`Function1D` or any vectorised callable.
    """
    if not 0 < m <= 1:
        raise ValueError("m must lie in (0, 1]; use check_starshaped for m = 0")
    fn, xs, ts, gx, tol = _prepare(g, b, grid)
    ys = xs
    first = worst = None
    worst_gap = -math.inf
    for i, x in enumerate(xs):
        # rows: y, columns: t
        args = ts[None, :] * x + (m * (1.0 - ts))[None, :] * ys[:, None]
        lhs = _eval_checked(fn, args)
        rhs = ts[None, :] * gx[i] + (m * (1.0 - ts))[None, :] * gx[:, None]
        gap = lhs - rhs
        k = int(np.argmax(gap))
        if gap.flat[k] > worst_gap:
            worst_gap = float(gap.flat[k])
            j, l = divmod(k, ts.size)
            worst = Witness(float(x), float(ys[j]), float(ts[l]),
                            float(lhs.flat[k]), float(rhs.flat[k]))
        if first is None:
            bad = gap > tol
            if bad.any():
                k = int(np.argmax(bad))
                j, l = divmod(k, ts.size)
                first = Witness(float(x), float(ys[j]), float(ts[l]),
                                float(lhs.flat[k]), float(rhs.flat[k]))
    samples = xs.size * ys.size * ts.size
    status = VIOLATED if first else CERTIFIED
    return ConvexityReport(status, float(m), first, samples, tol, worst)


def check_starshaped(g, b: float,
                     grid: ConvexityGrid = ConvexityGrid()) -> ConvexityReport:
    """Sample g(t*x) <= t*g(x) over [0, b] x [0, 1] (the m = 0 case)."""
    fn, xs, ts, gx, tol = _prepare(g, b, grid)
    args = xs[:, None] * ts[None, :]
    lhs = _eval_checked(fn, args)
    rhs = ts[None, :] * gx[:, None]
    gap = lhs - rhs

    def witness(k):
        i, l = divmod(k, ts.size)
        return Witness(float(xs[i]), 0.0, float(ts[l]),
                       float(lhs.flat[k]), float(rhs.flat[k]))

    bad = gap > tol
    first = witness(int(np.argmax(bad))) if bad.any() else None
    worst = witness(int(np.argmax(gap)))
    status = VIOLATED if first else CERTIFIED
    return ConvexityReport(status, 0.0, first, gap.size, tol, worst)


def in_km(f, b: float, m: float,
          grid: ConvexityGrid = ConvexityGrid()) -> tuple[bool, ConvexityReport]:
    """Membership in K_m(b): m-convex on [0, b] and f(0) <= 0."""
    report = check_m_convex(f, b, m, grid)
    fn, _ = _vectorised(f)
    f0 = float(fn(np.array([0.0]))[0])
    return report.certified and f0 <= report.tolerance, report


def max_m(g, b: float, grid: ConvexityGrid = ConvexityGrid(),
          resolution: float = 0.05) -> float:
    """Largest m on the lattice {resolution, 2*resolution, ..., 1} that certifies.

    The lattice is scanned downward from 1 without assuming monotonicity in m;
    0 is returned when nothing certifies.
    """
    if not 0 < resolution < 1:
        raise ValueError("resolution must lie in (0, 1)")
    steps = int(math.floor(1.0 / resolution + 1e-9))
    lattice = [round(k * resolution, 12) for k in range(steps, 0, -1)]
    if math.isclose(lattice[0], 1.0):
        lattice[0] = 1.0
    else:
        lattice.insert(0, 1.0)
    for m in lattice:
        if check_m_convex(g, b, m, grid).certified:
            return m
    return 0.0


def abs_derivative_power(f: Function1D, q: float = 1.0) -> Function1D:
    """|f'|^q as a Function1D, for certifying the hypotheses of the bounds."""
    def value(x):
        return np.abs(f.derivative(x)) ** q

    def derivative(x):
        raise NotImplementedError("|f'|^q is only ever sampled, never differentiated")

    return Function1D(f"|({f.name})'|^{q:g}", value, derivative, None, f.domain)
