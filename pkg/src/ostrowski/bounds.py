"""Ostrowski and Hermite-Hadamard type bounds and their verification.

Every evaluator returns a :class:`BoundResult` pairing the exactly computed
left-hand side with a closed-form right-hand side. Notation used throughout:

    lam = (b - x) / (b - a)     rho = (x - a) / (b - a)

and ``|f'|^q`` evaluated at the m-scaled points a/m, b/m, x/m where a bound
needs them. A min-argument whose scaled point falls outside ``f.domain`` is
dropped (treated as +inf) and listed under ``details["infeasible"]``.

None of these functions check the convexity hypotheses; see
:mod:`ostrowski.mconvex` for that.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, InfeasibleBoundError
from .funlib import DEFAULT_TOL, Function1D, Interval, mean_value
from .kronrod import adaptive_quad
from .serialization import text

FIRST = "first"
SECOND = "second"
NOT_APPLICABLE = "notApplicable"

HOLDS_RTOL = 1e-9


@dataclass(frozen=True)
class BoundParams:
    interval: Interval
    x: float
    m: float = 1.0
    p: Optional[float] = None
    q: Optional[float] = None
    M: Optional[float] = None

    def __post_init__(self):
        a, b = self.interval.a, self.interval.b
        x = float(self.x)
        if not a <= x <= b:
            raise ValueError(f"x={x} is outside [{a}, {b}]")
        object.__setattr__(self, "x", x)
        if not 0 < self.m <= 1:
            raise ValueError(f"m must lie in (0, 1], got {self.m}")
        if self.M is not None and self.M < 0:
            raise ValueError("M must be non-negative")
        p, q = self.p, self.q
        if p is not None:
            if not p > 1:
                raise ValueError(f"p must exceed 1, got {p}")
            conjugate = p / (p - 1)
            if q is None:
                object.__setattr__(self, "q", conjugate)
            elif abs(q - conjugate) > 1e-12 * max(1.0, conjugate):
                raise ValueError(f"q={q} is not the conjugate of p={p} ({conjugate})")
        if self.q is not None and not self.q >= 1:
            raise ValueError(f"q must be at least 1, got {self.q}")

    @classmethod
    def midpoint(cls, interval: Interval, **kwargs) -> "BoundParams":
        return cls(interval, interval.midpoint, **kwargs)

    @property
    def a(self) -> float:
        return self.interval.a

    @property
    def b(self) -> float:
        return self.interval.b

    @property
    def lam(self) -> float:
        return (self.b - self.x) / (self.b - self.a)

    @property
    def rho(self) -> float:
        return (self.x - self.a) / (self.b - self.a)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ValueError(f"this bound needs parameter(s) {', '.join(missing)}")


@dataclass(frozen=True)
class BoundResult:
    lhs: float
    rhs: float
    branch: str = NOT_APPLICABLE
    details: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -HOLDS_RTOL * (1.0 + abs(self.rhs))

    def to_dict(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
               "branch": self.branch, "holds": self.holds}
        out.update(self.details)
        return out


# ----------------------------------------------------------------- helpers

def _dq(f: Function1D, u: float, q: float = 1.0) -> float:
    """|f'(u)|^q, raising DomainError outside the domain."""
    f.check_domain(u)
    d = float(f.derivative(u))
    if not math.isfinite(d):
        raise DomainError(f"{f.name}: derivative not finite at {u}", point=u)
    return abs(d) ** q


def _smallest(*options):
    """Minimum over lazily evaluated arguments, dropping infeasible ones.

    Returns (value, branch label, all values, infeasible labels).
    """
    labels = (FIRST, SECOND)
    values, infeasible = [], []
    for label, thunk in zip(labels, options):
        try:
            values.append(thunk())
        except DomainError:
            values.append(math.inf)
            infeasible.append(label)
    if all(math.isinf(v) for v in values):
        raise InfeasibleBoundError("every branch needs derivative values outside the domain")
    k = int(np.argmin(values))
    return values[k], labels[k], values, infeasible


def _mean(f, prm, tol, mean):
    return mean_value(f, prm.interval, tol) if mean is None else mean


def ostrowski_lhs(f: Function1D, prm: BoundParams, tol: float = DEFAULT_TOL,
                  mean: Optional[float] = None) -> float:
    """|f(x) - average of f over [a, b]|."""
    return abs(float(f(prm.x)) - _mean(f, prm, tol, mean))


def _midpoint_lhs(f, iv, tol, mean):
    avg = mean_value(f, iv, tol) if mean is None else mean
    return abs(float(f(iv.midpoint)) - avg)


# ----------------------------------------------------- kernel identity

def kernel_identity_residual(f: Function1D, prm: BoundParams,
                             tol: float = DEFAULT_TOL) -> float:
    """Residual of the kernel representation of the Ostrowski difference.

    f(x) - mean = (a - b) * int_0^1 k(t) f'(t a + (1 - t) b) dt with
    k(t) = t on [0, lam] and t - 1 on (lam, 1]. Both sides come from the
    quadrature oracle, so the residual should sit at the oracle's accuracy.
    """
    a, b, lam = prm.a, prm.b, prm.lam
    f.check_domain(a, b)
    lhs = float(f(prm.x)) - mean_value(f, prm.interval, tol)

    def fprime(t):
        return np.asarray(f.derivative(t * a + (1.0 - t) * b), dtype=float)

    left = right = 0.0
    if lam > 0:
        left = adaptive_quad(lambda t: t * fprime(t), 0.0, lam, tol)[0]
    if lam < 1:
        right = adaptive_quad(lambda t: (t - 1.0) * fprime(t), lam, 1.0, tol)[0]
    return abs(lhs - (a - b) * (left + right))


# ------------------------------------------------- bounded-derivative forms

def classical_ostrowski_bound(prm: BoundParams) -> float:
    """M/(b-a) * ((x-a)^2 + (b-x)^2)/2 for |f'| <= M."""
    prm.require("M")
    a, b, x = prm.a, prm.b, prm.x
    return prm.M / (b - a) * ((x - a) ** 2 + (b - x) ** 2) / 2


def lipschitz_midpoint_bound(prm: BoundParams) -> float:
    """M (b-a)/4 for an M-Lipschitz f at the midpoint."""
    prm.require("M")
    return prm.M * (prm.b - prm.a) / 4


def holder_lipschitz_bound(prm: BoundParams) -> float:
    """Holder bound with |f'| <= M:
    (p+1)^(-1/p) ((1+m)/2)^(1/q) M ((b-x)^2 + (x-a)^2)/(b-a)."""
    prm.require("p", "M")
    a, b, x, p, q, m = prm.a, prm.b, prm.x, prm.p, prm.q, prm.m
    return ((p + 1) ** (-1 / p) * ((1 + m) / 2) ** (1 / q) * prm.M
            * ((b - x) ** 2 + (x - a) ** 2) / (b - a))


# ------------------------------------------------------ m-convex |f'|

def kernel_weights(lam: float, rho: float) -> tuple[float, float]:
    """Weights of |f'(a)| and m|f'(b/m)| after integrating the kernel
    against the m-convexity estimate of |f'|.

    Equal to 1/6 - lam^2/2 + 2 lam^3/3 and lam^2/2 - lam^3/3 + rho^3/3; the
    factored form keeps both non-negative in floating point.
    """
    w_near = lam ** 3 / 3 + rho ** 2 * (3 - 2 * rho) / 6
    w_far = lam ** 2 * (3 - 2 * lam) / 6 + rho ** 3 / 3
    return w_near, w_far


def mconvex_ostrowski_bound(f: Function1D, prm: BoundParams,
                            tol: float = DEFAULT_TOL,
                            mean: Optional[float] = None) -> BoundResult:
    """Ostrowski bound when |f'| is m-convex.

    rhs = (b-a) * min{ w1|f'(a)| + m w2|f'(b/m)|,  w2|f'(b)| + m w1|f'(a/m)| }

    with (w1, w2) from :func:`kernel_weights`. The second argument expands
    |f'| around b and a/m, which moves each weight to the opposite endpoint.
    """
    a, b, m = prm.a, prm.b, prm.m
    w1, w2 = kernel_weights(prm.lam, prm.rho)
    best, branch, values, infeasible = _smallest(
        lambda: w1 * _dq(f, a) + m * w2 * _dq(f, b / m),
        lambda: w2 * _dq(f, b) + m * w1 * _dq(f, a / m),
    )
    lhs = ostrowski_lhs(f, prm, tol, mean)
    return BoundResult(lhs, (b - a) * best, branch,
                       {"first": (b - a) * values[0], "second": (b - a) * values[1],
                        "infeasible": infeasible})


def holder_ostrowski_bound(f: Function1D, prm: BoundParams,
                           tol: float = DEFAULT_TOL,
                           mean: Optional[float] = None) -> BoundResult:
    """Ostrowski bound via Holder's inequality, |f'|^q m-convex, 1/p + 1/q = 1.

    rhs = (p+1)^(-1/p)/(b-a) * [ (b-x)^2 R^(1/q) + (x-a)^2 L^(1/q) ] where
    R and L are the Hermite-Hadamard mins of |f'|^q on [x, b] and [a, x].
    Each min is chosen independently; a zero weight skips its term.
    """
    prm.require("p")
    a, b, x, m, p, q = prm.a, prm.b, prm.x, prm.m, prm.p, prm.q
    details = {}
    total = 0.0
    for name, weight, lo, hi in (("right", (b - x) ** 2, x, b),
                                 ("left", (x - a) ** 2, a, x)):
        if weight == 0:
            details[f"{name}Branch"] = NOT_APPLICABLE
            continue
        # R uses {f'(b), f'(x/m)} then {f'(x), f'(b/m)}; L mirrors with a.
        if name == "right":
            best, branch, values, infeasible = _smallest(
                lambda: (_dq(f, b, q) + m * _dq(f, x / m, q)) / 2,
                lambda: (_dq(f, x, q) + m * _dq(f, b / m, q)) / 2,
            )
        else:
            best, branch, values, infeasible = _smallest(
                lambda: (_dq(f, a, q) + m * _dq(f, x / m, q)) / 2,
                lambda: (_dq(f, x, q) + m * _dq(f, a / m, q)) / 2,
            )
        total += weight * best ** (1 / q)
        details[f"{name}Branch"] = branch
        details[f"{name}Min"] = best
        if infeasible:
            details[f"{name}Infeasible"] = infeasible
    rhs = (p + 1) ** (-1 / p) / (b - a) * total
    lhs = ostrowski_lhs(f, prm, tol, mean)
    return BoundResult(lhs, rhs, NOT_APPLICABLE, details)


def power_mean_ostrowski_bound(f: Function1D, prm: BoundParams,
                               tol: float = DEFAULT_TOL,
                               mean: Optional[float] = None) -> BoundResult:
    """Ostrowski bound via the power-mean inequality, |f'|^q m-convex, q >= 1.

    rhs = (b-a) (1/2)^(1-1/q) { lam^(2-2/q) [lam^3/3 A + m lam^2(3-2lam)/6 B]^(1/q)
                              + rho^(2-2/q) [rho^2(3-2rho)/6 A + m rho^3/3 B]^(1/q) }

    with A = |f'(a)|^q and B = |f'(b/m)|^q. Only this one expansion exists,
    so there is no outer min. At q = 1 it coincides with the first argument
    of :func:`mconvex_ostrowski_bound`.
    """
    prm.require("q")
    a, b, m, q = prm.a, prm.b, prm.m, prm.q
    lam, rho = prm.lam, prm.rho
    try:
        A = _dq(f, a, q)
        B = _dq(f, b / m, q)
    except DomainError as exc:
        raise InfeasibleBoundError(str(exc)) from exc
    r = 1 - 1 / q
    near = lam ** (2 * r) * (lam ** 3 / 3 * A + m * lam ** 2 * (3 - 2 * lam) / 6 * B) ** (1 / q)
    far = rho ** (2 * r) * (rho ** 2 * (3 - 2 * rho) / 6 * A + m * rho ** 3 / 3 * B) ** (1 / q)
    rhs = (b - a) * 0.5 ** r * (near + far)
    lhs = ostrowski_lhs(f, prm, tol, mean)
    return BoundResult(lhs, rhs, NOT_APPLICABLE, {"nearTerm": near, "farTerm": far})


def holder_midpoint_bound(f: Function1D, prm: BoundParams,
                          tol: float = DEFAULT_TOL,
                          mean: Optional[float] = None) -> BoundResult:
    """Midpoint form of the Holder bound with the (p+1)^(-1/p) factor dropped.

    rhs = (b-a)/4 (mu1^(1/q) + mu2^(1/q)), mu1 and mu2 being the
    Hermite-Hadamard mins of |f'|^q on [c, b] and [a, c], c = (a+b)/2.
    ``prm.x`` is ignored; the bound is always taken at the midpoint.
    """
    prm.require("q")
    a, b, m, q = prm.a, prm.b, prm.m, prm.q
    c = prm.interval.midpoint
    mu1, br1, v1, inf1 = _smallest(
        lambda: (_dq(f, b, q) + m * _dq(f, c / m, q)) / 2,
        lambda: (_dq(f, c, q) + m * _dq(f, b / m, q)) / 2,
    )
    mu2, br2, v2, inf2 = _smallest(
        lambda: (_dq(f, a, q) + m * _dq(f, c / m, q)) / 2,
        lambda: (_dq(f, c, q) + m * _dq(f, a / m, q)) / 2,
    )
    rhs = (b - a) / 4 * (mu1 ** (1 / q) + mu2 ** (1 / q))
    lhs = _midpoint_lhs(f, prm.interval, tol, mean)
    return BoundResult(lhs, rhs, NOT_APPLICABLE,
                       {"mu1": mu1, "mu2": mu2, "mu1Branch": br1, "mu2Branch": br2,
                        "infeasible": inf1 + inf2})


# ------------------------------------------- Hermite-Hadamard references

def hadamard_right_bound(f: Function1D, iv: Interval, m: float) -> tuple[float, str]:
    """min{(f(a) + m f(b/m))/2, (f(b) + m f(a/m))/2}, an upper bound for the
    mean of an m-convex f. Returns the value and which argument won."""
    if not 0 < m <= 1:
        raise ValueError("m must lie in (0, 1]")
    a, b = iv.a, iv.b
    value, branch, _, _ = _smallest(
        lambda: (float(f(a)) + m * float(f(b / m))) / 2,
        lambda: (float(f(b)) + m * float(f(a / m))) / 2,
    )
    return value, branch


def power_mean_midpoint_bound(f: Function1D, prm: BoundParams,
                              tol: float = DEFAULT_TOL,
                              mean: Optional[float] = None) -> BoundResult:
    """(b-a) 3^(1-1/q)/8 (|f'(a)| + m^(1/q) |f'(b/m)|) at the midpoint."""
    prm.require("q")
    a, b, m, q = prm.a, prm.b, prm.m, prm.q
    try:
        rhs = (b - a) * 3 ** (1 - 1 / q) / 8 * (_dq(f, a) + m ** (1 / q) * _dq(f, b / m))
    except DomainError as exc:
        raise InfeasibleBoundError(str(exc)) from exc
    return BoundResult(_midpoint_lhs(f, prm.interval, tol, mean), rhs)


def convex_midpoint_bound(f: Function1D, prm: BoundParams,
                          tol: float = DEFAULT_TOL,
                          mean: Optional[float] = None) -> BoundResult:
    """(b-a)/8 (|f'(a)| + |f'(b)|) at the midpoint, for convex |f'|."""
    a, b = prm.a, prm.b
    rhs = (b - a) / 8 * (_dq(f, a) + _dq(f, b))
    return BoundResult(_midpoint_lhs(f, prm.interval, tol, mean), rhs)


def mconvex_midpoint_bound(f: Function1D, prm: BoundParams,
                           tol: float = DEFAULT_TOL,
                           mean: Optional[float] = None) -> BoundResult:
    """(b-a)/4 min{((|f'(a)|^q + m|f'(b/m)|^q)/2)^(1/q),
    ((m|f'(a/m)|^q + |f'(b)|^q)/2)^(1/q)} at the midpoint."""
    prm.require("q")
    a, b, m, q = prm.a, prm.b, prm.m, prm.q
    best, branch, values, infeasible = _smallest(
        lambda: ((_dq(f, a, q) + m * _dq(f, b / m, q)) / 2) ** (1 / q),
        lambda: ((m * _dq(f, a / m, q) + _dq(f, b, q)) / 2) ** (1 / q),
    )
    lhs = _midpoint_lhs(f, prm.interval, tol, mean)
    return BoundResult(lhs, (b - a) / 4 * best, branch, {"infeasible": infeasible})


def intro_midpoint_bounds(f: Function1D, prm: BoundParams,
                          tol: float = DEFAULT_TOL) -> dict[str, BoundResult]:
    """The three reference midpoint bounds, keyed by name."""
    mean = mean_value(f, prm.interval, tol)
    return {
        "powerMean": power_mean_midpoint_bound(f, prm, tol, mean),
        "convex": convex_midpoint_bound(f, prm, tol, mean),
        "mconvexMin": mconvex_midpoint_bound(f, prm, tol, mean),
    }


def trapezoid_bound(f: Function1D, prm: BoundParams,
                    tol: float = DEFAULT_TOL,
                    mean: Optional[float] = None) -> BoundResult:
    """Trapezoid-side gap |(f(a)+f(b))/2 - mean| <= (b-a)/4 (mu1^(1/q) + mu2^(1/q)).

    mu1 = min{(|f'(a)|^q + m|f'(c/m)|^q)/2, (|f'(c)|^q + m|f'(a/m)|^q)/2},
    mu2 the same with b in place of a, c the midpoint.
    """
    prm.require("q")
    a, b, m, q = prm.a, prm.b, prm.m, prm.q
    c = prm.interval.midpoint
    mu1, br1, _, inf1 = _smallest(
        lambda: (_dq(f, a, q) + m * _dq(f, c / m, q)) / 2,
        lambda: (_dq(f, c, q) + m * _dq(f, a / m, q)) / 2,
    )
    mu2, br2, _, inf2 = _smallest(
        lambda: (_dq(f, b, q) + m * _dq(f, c / m, q)) / 2,
        lambda: (_dq(f, c, q) + m * _dq(f, b / m, q)) / 2,
    )
    avg = mean_value(f, prm.interval, tol) if mean is None else mean
    lhs = abs((float(f(a)) + float(f(b))) / 2 - avg)
    rhs = (b - a) / 4 * (mu1 ** (1 / q) + mu2 ** (1 / q))
    return BoundResult(lhs, rhs, NOT_APPLICABLE,
                       {"mu1": mu1, "mu2": mu2, "mu1Branch": br1, "mu2Branch": br2,
                        "infeasible": inf1 + inf2})


# ----------------------------------------------------------------- sweeps

THEOREMS = ("mconvex", "holder", "power_mean", "holder_lipschitz")


@dataclass(frozen=True)
class SweepRow:
    x: float
    result: Optional[BoundResult]
    error: Optional[str] = None


@dataclass
class SweepReport:
    theorem: str
    rows: list

    @property
    def violations(self) -> int:
        return sum(1 for r in self.rows if r.result is not None and not r.result.holds)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.result is None)

    def _argmin(self):
        ok = [r for r in self.rows if r.result is not None]
        if not ok:
            return None
        return min(ok, key=lambda r: r.result.slack)

    @property
    def min_slack(self) -> float:
        row = self._argmin()
        return math.nan if row is None else row.result.slack

    @property
    def argmin_x(self) -> float:
        row = self._argmin()
        return math.nan if row is None else row.x

    def summary(self) -> dict:
        return {"violations": self.violations, "minSlack": self.min_slack,
                "argminX": self.argmin_x, "failures": self.failures,
                "points": len(self.rows)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "lhs", "rhs", "slack", "branch", "holds"])
        for row in self.rows:
            r = row.result
            if r is None:
                writer.writerow([text(row.x), "", "", "", "error", "false"])
            else:
                writer.writerow([text(row.x), text(r.lhs), text(r.rhs),
                                 text(r.slack), r.branch, text(r.holds)])
        return buf.getvalue()


def verify_sweep(f: Function1D, iv: Interval, m: float, theorem: str,
                 p: Optional[float] = None, q: Optional[float] = None,
                 M: Optional[float] = None, points: int = 101,
                 tol: float = DEFAULT_TOL) -> SweepReport:
    """Evaluate one bound at ``points`` equally spaced x in [a, b].

    ``theorem`` is one of :data:`THEOREMS`. Per-point failures are kept as
    rows with an error message; the sweep never stops early.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"theorem must be one of {THEOREMS}, got {theorem!r}")
    if points < 2:
        raise ValueError("a sweep needs at least two points")
    avg = mean_value(f, iv, tol)
    rows = []
    for x in np.linspace(iv.a, iv.b, points):
        x = float(x)
        try:
            prm = BoundParams(iv, x, m=m, p=p, q=q, M=M)
            if theorem == "mconvex":
                result = mconvex_ostrowski_bound(f, prm, tol, avg)
            elif theorem == "holder":
                result = holder_ostrowski_bound(f, prm, tol, avg)
            elif theorem == "power_mean":
                result = power_mean_ostrowski_bound(f, prm, tol, avg)
            else:
                result = BoundResult(ostrowski_lhs(f, prm, tol, avg),
                                     holder_lipschitz_bound(prm))
            rows.append(SweepRow(x, result))
        except (DomainError, InfeasibleBoundError, ValueError) as exc:
            rows.append(SweepRow(x, None, str(exc)))
    return SweepReport(theorem, rows)

