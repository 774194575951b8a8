"""Closed-form bound calculators.

The sample-complexity statements come with unspecified leading constants;
every report therefore records the constant it was evaluated with (default
1) instead of hiding it. Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float
    constant: float
    flags: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {"name": self.name, "inputs": dict(self.inputs),
                "value": self.value, "constant": self.constant,
                "flags": list(self.flags)}


def _check_unit(name: str, v: float, *, closed_top: bool = True):
    top_ok = v <= 1.0 if closed_top else v < 1.0
    if not (0.0 < v and top_ok):
        rng = "(0, 1]" if closed_top else "(0, 1)"
        raise ValueError(f"{name} must be in {rng}, got {v}")


def realizable_sample_bound(d: int, epsilon: float, alpha: float, beta: float,
                            c: float = 1.0) -> BoundReport:
    """Sample size c * (d^2 ln(d/(eps*alpha)) + ln(1/beta)) / (eps*alpha)
    sufficient for excess error alpha in the realizable setting."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if c <= 0:
        raise ValueError("c must be positive")
    for nm, v in (("epsilon", epsilon), ("alpha", alpha), ("beta", beta)):
        _check_unit(nm, v)
    core = d * d * math.log(d / (epsilon * alpha)) + math.log(1.0 / beta)
    value = c * core / (epsilon * alpha)
    flags = ("degenerate parameters",) if value <= 0 else ()
    return BoundReport(
        name="realizable_sample_bound",
        inputs={"d": d, "epsilon": epsilon, "alpha": alpha, "beta": beta},
        value=value, constant=c, flags=flags)


def agnostic_sample_bound(d: int, epsilon: float, alpha: float, beta: float,
                          c: float = 1.0) -> BoundReport:
    """Sample size c * (d^2 ln(d/(eps*alpha)) + ln(1/beta)) *
    max(1/alpha^2, 1/(eps*alpha)) for the agnostic setting."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if c <= 0:
        raise ValueError("c must be positive")
    for nm, v in (("epsilon", epsilon), ("alpha", alpha), ("beta", beta)):
        _check_unit(nm, v)
    core = d * d * math.log(d / (epsilon * alpha)) + math.log(1.0 / beta)
    value = c * core * max(1.0 / alpha ** 2, 1.0 / (epsilon * alpha))
    flags = ("degenerate parameters",) if value <= 0 else ()
    return BoundReport(
        name="agnostic_sample_bound",
        inputs={"d": d, "epsilon": epsilon, "alpha": alpha, "beta": beta},
        value=value, constant=c, flags=flags)


def compression_bound(k: int, n: int, beta: float, emp_err: float) -> float:
    """Generalization deviation for hypotheses describable by k sample
    points: sqrt(emp_err * 4k ln(n/beta) / n) + 8k ln(n/beta)/n + 2k/n.

    For the halfspace-intersection class, k = d^2 (at most d halfspaces,
    each supported by at most d points).
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, n], got k={k}, n={n}")
    _check_unit("beta", beta, closed_top=False)
    if not 0.0 <= emp_err <= 1.0:
        raise ValueError(f"emp_err must be in [0, 1], got {emp_err}")
    log_term = math.log(n / beta)
    return (math.sqrt(emp_err * 4.0 * k * log_term / n)
            + 8.0 * k * log_term / n + 2.0 * k / n)


def mechanism_utility_bound(class_size: int, epsilon: float, n: int,
                            beta: float) -> float:
    """Excess empirical error of the exponential mechanism over a class of
    the given size: (2/(eps*n)) * (ln(class_size) + ln(1/beta)), the
    standard tail with the sensitivity-1/n score (constant 2)."""
    if class_size < 1:
        raise ValueError("class_size must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _check_unit("beta", beta)
    return (2.0 / (epsilon * n)) * (math.log(class_size) + math.log(1.0 / beta))
