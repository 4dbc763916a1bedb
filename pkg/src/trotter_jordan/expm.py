"""Matrix exponential.

:func:`expm` is the production routine (Taylor series with scaling and
squaring).  :func:`expm_oracle` is an independent reference: unscaled Taylor
summation with compensated accumulation, truncated by a certified remainder
bound.  Tests use the oracle as ground truth.
"""
from __future__ import annotations

import math

import numpy as np

from .linalg import MatrixOverflowError, NormKind, as_matrix, identity, norm

TAYLOR_DEGREE = 20
SCALING_THRESHOLD = 0.5
ORACLE_MAX_TERMS = 400
ORACLE_MIN_TOL = 1e-15


class OracleToleranceError(RuntimeError):
    """The requested oracle tolerance cannot be certified within the term budget."""


def expm(a) -> np.ndarray:
    """exp(a) by scaling and squaring.

    Picks the smallest ``s >= 0`` with ``||a||_F / 2**s <= 0.5``, evaluates the
    degree-20 Taylor polynomial of ``a / 2**s`` by Horner's rule, then squares
    ``s`` times.
    """
    a = as_matrix(a)
    fro = norm(a, NormKind.FROBENIUS)
    s = 0
    if fro > SCALING_THRESHOLD:
        s = max(0, math.ceil(math.log2(fro / SCALING_THRESHOLD)))
        # guard against log2 rounding either way
        while fro / 2.0**s > SCALING_THRESHOLD:
            s += 1
        while s > 0 and fro / 2.0 ** (s - 1) <= SCALING_THRESHOLD:
            s -= 1
    x = a / 2.0**s
    eye = identity(a.shape[0])
    result = eye / math.factorial(TAYLOR_DEGREE)
    for k in range(TAYLOR_DEGREE - 1, -1, -1):
        result = x @ result + eye / math.factorial(k)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise MatrixOverflowError("expm overflowed")
    return result


def _two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Knuth's error-free transformation, componentwise on real arrays
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def expm_oracle(a, tol: float = 1e-14) -> np.ndarray:
    """exp(a) by plain Taylor summation with a certified truncation point.

    Terms ``a**k / k!`` are accumulated with compensated (TwoSum) addition on
    real and imaginary parts.  Summation stops after the first degree ``K``
    for which the tail bound ``||a||**(K+1) / (K+1)! / (1 - ||a||/(K+2))``
    (Frobenius norm, with ``||a||/(K+2) < 1``) is at most ``tol``.
    """
    a = as_matrix(a)
    if not tol >= ORACLE_MIN_TOL:
        raise ValueError(f"tol must be >= {ORACLE_MIN_TOL}, got {tol}")
    r = norm(a, NormKind.FROBENIUS)
    if not math.isfinite(r):
        raise MatrixOverflowError("oracle input norm is not finite")

    dim = a.shape[0]
    term = identity(dim)
    hi_re, hi_im = term.real.copy(), term.imag.copy()
    lo_re, lo_im = np.zeros((dim, dim)), np.zeros((dim, dim))
    scalar = 1.0  # r**k / k!
    for k in range(0, ORACLE_MAX_TERMS + 1):
        if k > 0:
            term = (term @ a) / k
            hi_re, e = _two_sum(hi_re, term.real)
            lo_re += e
            hi_im, e = _two_sum(hi_im, term.imag)
            lo_im += e
            scalar = scalar * r / k
        ratio = r / (k + 2)
        if ratio < 1.0:
            tail = scalar * r / (k + 1) / (1.0 - ratio)
            if tail <= tol:
                out = (hi_re + lo_re) + 1j * (hi_im + lo_im)
                if not np.all(np.isfinite(out)):
                    raise MatrixOverflowError("expm_oracle overflowed")
                return out
    raise OracleToleranceError(
        f"tolerance {tol} not reached within {ORACLE_MAX_TERMS} Taylor terms (||a||_F = {r:.3g})"
    )
