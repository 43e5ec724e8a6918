"""Functions of one variable, built-in families and the integration oracle."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import expr
from .errors import DomainError
from .kronrod import adaptive_quad

DEFAULT_TOL = 1e-10
MAX_EVALUATIONS = 1_000_000


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval endpoints must be finite")
        if not 0 <= a < b:
            raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    error: float
    evaluations: int


@dataclass(frozen=True, eq=False)
class Function1D:
    """A real function with its derivative on a closed domain ``[lo, hi]``.

    ``value`` and ``derivative`` must accept numpy arrays. When an
    antiderivative is given it is checked against ``value`` on construction.
    """

    name: str
    value: Callable
    derivative: Callable
    antiderivative: Optional[Callable] = None
    domain: tuple = (0.0, math.inf)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.domain)
        if not (lo >= 0 and lo < hi):
            raise ValueError(f"bad domain {self.domain!r}: need 0 <= lo < hi")
        object.__setattr__(self, "domain", (lo, hi))
        if self.antiderivative is not None:
            self._check_antiderivative()

    def _check_antiderivative(self):
        lo, hi = self.domain
        top = min(hi, lo + 4.0)
        for x in np.linspace(lo, top, 9)[1:-1]:
            h = 1e-3 * (1.0 + abs(x))
            h = min(h, 0.25 * (x - lo), 0.25 * (top - x))
            F = self.antiderivative
            # five-point central stencil
            d = (F(x - 2 * h) - 8 * F(x - h) + 8 * F(x + h) - F(x + 2 * h)) / (12 * h)
            v = float(self.value(x))
            if abs(d - v) > 1e-8 * max(1.0, abs(v)):
                raise ValueError(
                    f"antiderivative of {self.name} does not match at x={x}: {d} vs {v}")

    def contains(self, x) -> bool:
        lo, hi = self.domain
        return bool(np.all(np.asarray(x) >= lo) and np.all(np.asarray(x) <= hi))

    def check_domain(self, *points) -> None:
        for x in points:
            if not self.contains(x):
                raise DomainError(
                    f"{self.name}: point {x} lies outside domain {list(self.domain)}",
                    point=x)

    def __call__(self, x):
        self.check_domain(x)
        return self.value(x)

    def d(self, x):
        """Derivative at ``x`` with a domain check."""
        self.check_domain(x)
        return self.derivative(x)

    def with_domain(self, lo: float, hi: float) -> "Function1D":
        return Function1D(self.name, self.value, self.derivative,
                          self.antiderivative, (lo, hi))


# ------------------------------------------------------------ built-ins

def _power(n):
    if n != int(n) or n < 2:
        raise ValueError(f"power needs an integer n >= 2, got {n}")
    n = int(n)
    return Function1D(
        f"x^{n}",
        lambda x: np.power(x, n),
        lambda x: n * np.power(x, n - 1),
        lambda x: float(x) ** (n + 1) / (n + 1),
    )


def _scaled_power(c, n):
    if n != int(n) or n < 1:
        raise ValueError(f"scaled_power needs an integer n >= 1, got {n}")
    n, c = int(n), float(c)
    return Function1D(
        f"{c:g}*x^{n}",
        lambda x: c * np.power(x, n),
        lambda x: c * n * np.power(x, n - 1),
        lambda x: c * float(x) ** (n + 1) / (n + 1),
    )


def _neg_log1p():
    return Function1D(
        "-ln(x+1)",
        lambda x: -np.log1p(x),
        lambda x: -1.0 / (1.0 + np.asarray(x, dtype=float)),
        lambda x: float(x) - (1.0 + float(x)) * math.log1p(float(x)),
    )


def _exp():
    return Function1D("exp(x)", np.exp, np.exp, lambda x: math.exp(x))


_FAMILIES = {
    "power": (_power, ("n",)),
    "scaled_power": (_scaled_power, ("c", "n")),
    "neg_log1p": (_neg_log1p, ()),
    "exp": (_exp, ()),
}


def builtin(family: str, *args, **params) -> Function1D:
    """Closed-form family member, e.g. ``builtin("power", n=3)``."""
    try:
        factory, names = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}") from None
    if len(args) > len(names):
        raise ValueError(f"{family} takes parameters {names}")
    values = dict(zip(names, args))
    for key, val in params.items():
        if key not in names:
            raise ValueError(f"{family} has no parameter {key!r}")
        values[key] = val
    missing = [k for k in names if k not in values]
    if missing:
        raise ValueError(f"{family} is missing parameter(s) {missing}")
    return factory(*(float(values[k]) for k in names))


def from_expression(source: str, domain=(0.0, math.inf)) -> Function1D:
    """Function from the expression language; the derivative is symbolic."""
    tree = expr.compile_source(source)
    dtree = expr.differentiate(tree)
    return Function1D(
        source,
        lambda x: expr.evaluate(tree, x),
        lambda x: expr.evaluate(dtree, x),
        None,
        domain,
    )


_DOMAIN_RE = re.compile(r":domain=([^:]+)$")


def parse_function_spec(spec: str) -> Function1D:
    """CLI function syntax: ``builtin:power:n=3``, ``expr:-ln(x+1)``,
    each optionally followed by ``:domain=lo,hi``."""
    domain = None
    m = _DOMAIN_RE.search(spec)
    if m:
        parts = m.group(1).split(",")
        if len(parts) != 2:
            raise ValueError(f"domain must be 'lo,hi', got {m.group(1)!r}")
        domain = (float(parts[0]), float(parts[1]))
        spec = spec[:m.start()]
    kind, _, rest = spec.partition(":")
    if kind == "expr":
        if not rest:
            raise ValueError("empty expression")
        return from_expression(rest, domain or (0.0, math.inf))
    if kind == "builtin":
        family, _, plist = rest.partition(":")
        params = {}
        for item in filter(None, plist.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"parameter {item!r} is not key=value")
            params[key.strip()] = float(val)
        f = builtin(family, **params)
        return f.with_domain(*domain) if domain else f
    raise ValueError(f"function spec must start with 'builtin:' or 'expr:', got {spec!r}")


# ------------------------------------------------------------ integration

def integrate(f: Function1D, iv: Interval, tol: float = DEFAULT_TOL,
              numeric: bool = False) -> QuadratureEstimate:
    """Integral of ``f`` over ``iv``.

    Uses the closed-form antiderivative when there is one unless ``numeric``
    forces the adaptive Gauss-Kronrod path.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    f.check_domain(iv.a, iv.b)
    if f.antiderivative is not None and not numeric:
        F = f.antiderivative
        return QuadratureEstimate(float(F(iv.b) - F(iv.a)), 0.0, 2)
    value, err, evals = adaptive_quad(f.value, iv.a, iv.b, tol, MAX_EVALUATIONS)
    return QuadratureEstimate(value, err, evals)


def mean_value(f: Function1D, iv: Interval, tol: float = DEFAULT_TOL,
               numeric: bool = False) -> float:
    return integrate(f, iv, tol * iv.length, numeric).value / iv.length
