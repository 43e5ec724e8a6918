"""Special means of two numbers and the mean inequalities derived from the bounds.

``power_gap_check`` bounds |A(a,b)^n - L_n(a,b)^n| using the midpoint form of
the m-convex Ostrowski bound applied to x^n; ``log_identric_gap_check`` bounds
|ln(I(a+1, b+1) / (A(a,b) + 1))| using the midpoint Holder bound applied to
-ln(x+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

HOLDS_RTOL = 1e-9


def _positive(*values):
    for v in values:
        if not v > 0:
            raise ValueError(f"means are defined for positive arguments, got {v}")


def arithmetic_mean(a: float, b: float) -> float:
    _positive(a, b)
    return (a + b) / 2


def p_logarithmic_mean(a: float, b: float, p: float) -> float:
    """[(b^(p+1) - a^(p+1)) / ((p+1)(b-a))]^(1/p); equals a when a == b."""
    _positive(a, b)
    if p in (-1, 0):
        raise ValueError("the p-logarithmic mean excludes p = -1 and p = 0")
    if a == b:
        return float(a)
    return ((b ** (p + 1) - a ** (p + 1)) / ((p + 1) * (b - a))) ** (1 / p)


def identric_mean(a: float, b: float) -> float:
    """(1/e) (b^b / a^a)^(1/(b-a)), computed in log space; equals a when a == b."""
    _positive(a, b)
    if a == b:
        return float(a)
    return math.exp((b * math.log(b) - a * math.log(a)) / (b - a) - 1)


def _log_identric(a: float, b: float) -> float:
    return (b * math.log(b) - a * math.log(a)) / (b - a) - 1


def _power_average(a: float, b: float, n: int) -> float:
    """L_n(a,b)^n = (b^(n+1) - a^(n+1)) / ((n+1)(b-a)), summed without cancellation."""
    return math.fsum(a ** k * b ** (n - k) for k in range(n + 1)) / (n + 1)


@dataclass(frozen=True)
class MeanCheckResult:
    lhs: float
    rhs: float
    components: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + HOLDS_RTOL * (1.0 + abs(self.rhs))

    def to_dict(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}
        out.update(self.components)
        return out


def _check_pair(a, b, m):
    if not 0 <= a < b or not math.isfinite(b):
        raise ValueError(f"need 0 <= a < b < inf, got a={a}, b={b}")
    if not 0 < m <= 1:
        raise ValueError(f"m must lie in (0, 1], got {m}")


def power_gap_check(a: float, b: float, n: int, m: float = 1.0) -> MeanCheckResult:
    """|A^n - L_n^n| <= n(b-a)/8 min{2A(a^(n-1), m(b/m)^(n-1)), 2A(b^(n-1), m(a/m)^(n-1))}.

    a = 0 is allowed: L_n^n stays finite for n >= 2.
    """
    _check_pair(a, b, m)
    if n != int(n) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    n = int(n)
    A = (a + b) / 2
    lhs = abs(A ** n - _power_average(a, b, n))
    # 2A(u, v) = u + v
    first = a ** (n - 1) + m * (b / m) ** (n - 1)
    second = b ** (n - 1) + m * (a / m) ** (n - 1)
    rhs = n * (b - a) / 8 * min(first, second)
    return MeanCheckResult(lhs, rhs, {"minArgs": [first, second],
                                      "branch": "first" if first <= second else "second"})


def log_identric_gap_check(a: float, b: float, m: float = 1.0,
                           q: float = 2.0) -> MeanCheckResult:
    """|ln(I(a+1,b+1)/(A(a,b)+1))| <= (b-a)/4 (eta1^(1/q) + eta2^(1/q)).

    eta1 and eta2 are mins of half-sums of q-th powers of 1/(b+1), 2m/(a+b+2m),
    2/(a+b+2), m/(b+m) (and the same with a). Each min is taken first and then
    raised to 1/q.
    """
    _check_pair(a, b, m)
    if not q > 1:
        raise ValueError(f"q must exceed 1, got {q}")
    s = a + b
    lhs = abs(_log_identric(a + 1, b + 1) - math.log((a + b) / 2 + 1))
    mid_scaled = (2 * m / (s + 2 * m)) ** q
    mid = (2 / (s + 2)) ** q
    eta1 = min(((1 / (b + 1)) ** q + m * mid_scaled) / 2,
               (mid + m * (m / (b + m)) ** q) / 2)
    eta2 = min(((1 / (a + 1)) ** q + m * mid_scaled) / 2,
               (mid + m * (m / (a + m)) ** q) / 2)
    rhs = (b - a) / 4 * (eta1 ** (1 / q) + eta2 ** (1 / q))
    return MeanCheckResult(lhs, rhs, {"eta1": eta1, "eta2": eta2})
