"""Interval estimates and tolerance checks for Monte Carlo counts."""

from __future__ import annotations

import math

from scipy.stats import binomtest


def wilson(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for k successes in n trials."""
    if n <= 0:
        raise ValueError("need at least one trial")
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)


def within_sigmas(k: int, n: int, p: float, sigmas: float = 3.0) -> bool:
    """|k/n - p| <= sigmas * sqrt(p(1-p)/n)."""
    return abs(k / n - p) <= sigmas * binomial_sigma(p, n) + 1e-12


def at_most_plus_sigmas(k: int, n: int, bound: float, sigmas: float = 3.0) -> bool:
    """k/n <= bound + sigmas * sqrt(bound(1-bound)/n)."""
    return k / n <= bound + sigmas * binomial_sigma(bound, n) + 1e-12


__all__ = ["wilson", "binomial_sigma", "within_sigmas", "at_most_plus_sigmas"]
