"""Closed-form error bounds for the Jordan-product formulas.

All of them are scalar functions of ``s = sum ||A_j||`` and the Trotter
number ``n``; :func:`F_matrix` is the matrix-valued degree-2 Taylor
polynomial both bases share.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import NormKind, TermSet, identity


def _check(s: float, n: int) -> None:
    if s < 0 or not math.isfinite(s):
        raise ValueError(f"s must be finite and nonnegative, got {s}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def suzuki_bound(s: float, n: int) -> float:
    """``s**3 * exp(s) / (3 n**2)``: global error bound for both the g and h formulas."""
    _check(s, n)
    return s**3 * math.exp(s) / (3.0 * n * n)


def taylor_remainder_bound(s: float, n: int) -> float:
    """``s**3 * exp(s/n) / (6 n**3)``: bound on one base factor's distance from F."""
    _check(s, n)
    return s**3 * math.exp(s / n) / (6.0 * n**3)


def scalar_taylor_tail(s: float, n: int) -> float:
    """``exp(x) - 1 - x - x**2/2`` at ``x = s/n``."""
    _check(s, n)
    x = s / n
    if x < 0.5:
        # positive series sum_{k>=3} x^k/k!; the closed form cancels badly here
        term = x**3 / 6.0
        total = 0.0
        k = 3
        while term > total * 1e-17 and term > 0.0:
            total += term
            k += 1
            term *= x / k
        return total
    return math.expm1(x) - x - x * x / 2.0


def telescoping_bound(norm_c: float, norm_d: float, diff: float, n: int) -> float:
    """``n * diff * max(norm_c, norm_d)**(n-1)`` bounding ``||C**n - D**n||``."""
    if min(norm_c, norm_d, diff) < 0:
        raise ValueError("norms and difference must be nonnegative")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return n * diff * max(norm_c, norm_d) ** (n - 1)


def F_matrix(terms: TermSet, n: int) -> np.ndarray:
    """``I + S + S**2/2`` with ``S = (sum A_j) / n``."""
    _check(0.0, n)
    s = terms.matrix_sum() / n
    return identity(terms.dim) + s + (s @ s) / 2


@dataclass(frozen=True)
class BoundReport:
    """Measured error against the theoretical bound, both under one norm."""

    n: int
    s: float
    measured_error: float
    bound: float
    norm_kind: NormKind

    @property
    def ratio(self) -> float:
        if self.bound == 0.0:
            return 0.0 if self.measured_error == 0.0 else math.inf
        return self.measured_error / self.bound

    def holds(self, slack: float = 1e-9) -> bool:
        return self.measured_error <= self.bound * (1.0 + slack)
