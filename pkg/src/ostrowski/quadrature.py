"""Composite midpoint rule with derivative-based a priori error bounds.

Both bounds assume |f'|^q is convex on [a, b] and come from summing the
per-panel midpoint bounds:

* ``holder``:     1/4 sum dx_i^2 (mu1^(1/q) + mu2^(1/q)), with
  mu1 = (|f'(c_i)|^q + |f'(x_i)|^q)/2 and mu2 = (|f'(c_i)|^q + |f'(x_{i+1})|^q)/2
* ``power_mean``: 3^(1-1/q)/8 sum dx_i^2 (|f'(x_i)| + |f'(x_{i+1})|)

where c_i is the panel midpoint. Sums always run over every panel.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .funlib import DEFAULT_TOL, Function1D, Interval, integrate
from .serialization import text

BOUNDS = ("holder", "power_mean")


@dataclass(frozen=True)
class Partition:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(v) for v in self.nodes)
        if len(nodes) < 2:
            raise ValueError("a partition needs at least one panel")
        if any(not lo < hi for lo, hi in zip(nodes, nodes[1:])):
            raise ValueError("partition nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, iv: Interval, n: int) -> "Partition":
        if n < 1:
            raise ValueError("need at least one panel")
        nodes = np.linspace(iv.a, iv.b, n + 1)
        return cls(tuple(nodes))

    @property
    def n(self) -> int:
        return len(self.nodes) - 1

    @property
    def interval(self) -> Interval:
        return Interval(self.nodes[0], self.nodes[-1])

    def panels(self):
        return zip(self.nodes[:-1], self.nodes[1:])


def midpoint_rule(f: Function1D, d: Partition) -> float:
    f.check_domain(d.nodes[0], d.nodes[-1])
    lo = np.array(d.nodes[:-1])
    hi = np.array(d.nodes[1:])
    values = np.asarray(f.value((lo + hi) / 2), dtype=float)
    return sum(float(v) for v in (hi - lo) * values)


def midpoint_error(f: Function1D, d: Partition, tol: float = DEFAULT_TOL) -> float:
    exact = integrate(f, d.interval, tol).value
    return abs(exact - midpoint_rule(f, d))


def _abs_dprime(f, points):
    f.check_domain(*points)
    return np.abs(np.asarray(f.derivative(np.asarray(points, dtype=float)), dtype=float))


def panel_bounds(f: Function1D, d: Partition, q: float, which: str) -> list[float]:
    """Per-panel terms of the selected a priori bound, left to right."""
    if which not in BOUNDS:
        raise ValueError(f"bound must be one of {BOUNDS}, got {which!r}")
    nodes = np.array(d.nodes)
    lo, hi = nodes[:-1], nodes[1:]
    dx = hi - lo
    d_lo = _abs_dprime(f, lo)
    d_hi = _abs_dprime(f, hi)
    if which == "holder":
        if not q > 1:
            raise ValueError(f"the Holder bound needs q > 1, got {q}")
        d_mid = _abs_dprime(f, (lo + hi) / 2)
        mu1 = (d_mid ** q + d_lo ** q) / 2
        mu2 = (d_mid ** q + d_hi ** q) / 2
        terms = dx ** 2 * (mu1 ** (1 / q) + mu2 ** (1 / q)) / 4
    else:
        if not q >= 1:
            raise ValueError(f"the power-mean bound needs q >= 1, got {q}")
        terms = 3 ** (1 - 1 / q) / 8 * dx ** 2 * (d_lo + d_hi)
    return [float(t) for t in terms]


def holder_rule_bound(f: Function1D, d: Partition, q: float) -> float:
    return sum(panel_bounds(f, d, q, "holder"))


def power_mean_rule_bound(f: Function1D, d: Partition, q: float) -> float:
    return sum(panel_bounds(f, d, q, "power_mean"))


@dataclass(frozen=True)
class QuadratureReport:
    n: int
    approximation: float
    true_error: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.true_error <= self.bound + 1e-9 * (1.0 + self.bound)

    @property
    def tightness(self) -> float:
        return self.true_error / self.bound if self.bound > 0 else 0.0

    def to_dict(self) -> dict:
        return {"n": self.n, "approximation": self.approximation,
                "trueError": self.true_error, "bound": self.bound,
                "holds": self.holds, "tightness": self.tightness}


def quadrature_report(f: Function1D, d: Partition, q: float, which: str,
                      tol: float = DEFAULT_TOL) -> QuadratureReport:
    approx = midpoint_rule(f, d)
    exact = integrate(f, d.interval, tol).value
    bound = sum(panel_bounds(f, d, q, which))
    return QuadratureReport(d.n, approx, abs(exact - approx), bound)


def panel_csv(f: Function1D, d: Partition, q: float, which: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "xi", "xi1", "panelBound"])
    for i, ((lo, hi), t) in enumerate(zip(d.panels(), panel_bounds(f, d, q, which))):
        writer.writerow([i, text(lo), text(hi), text(t)])
    return buf.getvalue()


class TargetUnreachable(ValueError):
    pass


def refine_to_bound(f: Function1D, iv: Interval, q: float, target: float,
                    which: str = "power_mean", max_panels: int = 1 << 16,
                    tol: float = DEFAULT_TOL) -> tuple[Partition, QuadratureReport]:
    """Double a uniform partition (n = 1, 2, 4, ...) until the a priori bound
    drops to ``target``; raises :class:`TargetUnreachable` past ``max_panels``."""
    if not target > 0:
        raise ValueError("target must be positive")
    n = 1
    while n <= max_panels:
        d = Partition.uniform(iv, n)
        if sum(panel_bounds(f, d, q, which)) <= target:
            return d, quadrature_report(f, d, q, which, tol)
        n *= 2
    raise TargetUnreachable(
        f"bound stays above {target} up to {max_panels} panels")
