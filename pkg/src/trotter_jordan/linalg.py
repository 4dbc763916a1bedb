"""Dense complex matrix arithmetic, Jordan products and submultiplicative norms.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
``(dim, dim)``.  Every public operation validates its inputs and checks that
its output is finite, raising :class:`MatrixOverflowError` otherwise.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

MAX_DIM = 64
POWER_ITER_RTOL = 1e-12
POWER_ITER_MAX_SQUARINGS = 64  # up to 2**64 power steps


class DimensionError(ValueError):
    """Operands have incompatible or unsupported shapes."""


class MatrixOverflowError(OverflowError):
    """An operation produced a non-finite entry."""


class NormKind(str, enum.Enum):
    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square, finite ``complex128`` array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixOverflowError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _check_same_dim(*mats: np.ndarray) -> None:
    dim = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape[0] != dim:
            raise DimensionError(f"dimension mismatch: {dim} vs {m.shape[0]}")


def _finite(m: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise MatrixOverflowError(f"{what} produced non-finite entries")
    return m


def mat_add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return _finite(a + b, "mat_add")


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    with np.errstate(over="ignore", invalid="ignore"):
        return _finite(a @ b, "mat_mul")


def jordan_product(a, b) -> np.ndarray:
    """Return ``(ab + ba) / 2``.

    Floating-point addition is commutative, so swapping the arguments gives a
    bit-identical result.
    """
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return _finite((a @ b + b @ a) / 2, "jordan_product")


def jordan_triple(a, b, c) -> np.ndarray:
    """Return the Jordan triple product ``(abc + cba) / 2``."""
    a, b, c = as_matrix(a), as_matrix(b), as_matrix(c)
    _check_same_dim(a, b, c)
    return _finite((a @ b @ c + c @ b @ a) / 2, "jordan_triple")


def jordan_triple_from_products(a, b, c) -> np.ndarray:
    """Triple product written with Jordan products only.

    ``(a∘b)∘c + (c∘b)∘a - (a∘c)∘b``; agrees with :func:`jordan_triple` up to
    rounding and serves as its cross-check.
    """
    return (
        jordan_product(jordan_product(a, b), c)
        + jordan_product(jordan_product(c, b), a)
        - jordan_product(jordan_product(a, c), b)
    )


def _frob(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(m.real**2 + m.imag**2)))


def _spectral_norm(a: np.ndarray) -> float:
    # Power iteration on g = aᴴa from a fixed start vector v0.  Pass k uses the
    # iterate g**(2**k) v0, obtained by repeatedly squaring a normalized copy
    # of g, and stops once the Rayleigh quotients of passes k and k+1 agree.
    # Doubling the step count per pass keeps the stopping test honest on
    # clustered spectra, where single-step differences stall long before the
    # estimate converges.
    gram = a.conj().T @ a
    scale = _frob(gram)
    g = gram / scale
    dim = a.shape[0]
    v0 = np.ones(dim, dtype=np.complex128) / np.sqrt(dim)
    if not np.any(g @ v0):
        v0 = np.zeros(dim, dtype=np.complex128)
        v0[0] = 1.0
    lam = float(np.vdot(v0, g @ v0).real)
    power = g
    for _ in range(POWER_ITER_MAX_SQUARINGS):
        w = power @ v0
        v = w / np.sqrt(np.vdot(w, w).real)
        new = float(np.vdot(v, g @ v).real)
        if abs(new - lam) <= POWER_ITER_RTOL * abs(new):
            lam = max(lam, new)
            break
        lam = new
        power = power @ power
        power /= _frob(power)
    return float(np.sqrt(max(lam, 0.0) * scale))


def norm(a, kind: NormKind = NormKind.SPECTRAL) -> float:
    """Spectral norm (largest singular value) or Frobenius norm of ``a``.

    The spectral norm is computed by power iteration on ``aᴴa`` from the
    all-ones start vector, falling back to ``e_1`` when the start lies in the
    null space.
    """
    a = as_matrix(a)
    kind = NormKind(kind)
    if kind is NormKind.FROBENIUS:
        return _frob(a)
    if not np.any(a):
        return 0.0
    return _spectral_norm(a)


def mat_power(a, n: int) -> np.ndarray:
    """``a**n`` by binary exponentiation."""
    a = as_matrix(a)
    if int(n) != n or n < 1:
        raise ValueError(f"power must be a positive integer, got {n!r}")
    n = int(n)
    result = None
    base = a
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            if n & 1:
                result = base if result is None else result @ base
            n >>= 1
            if not n:
                break
            base = base @ base
    return _finite(result, "mat_power")


def is_hermitian(a, atol: float = 0.0) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= atol)


@dataclass(frozen=True, eq=False)
class TermSet:
    """An ordered family ``A_1, ..., A_m`` of equal-size matrices.

    ``norms`` and ``total`` cache the per-term norms and their sum under
    ``norm_kind``; they are computed on construction and never passed in.
    """

    terms: tuple[np.ndarray, ...]
    norm_kind: NormKind = NormKind.SPECTRAL
    norms: tuple[float, ...] = field(init=False, repr=False)
    total: float = field(init=False)

    def __post_init__(self):
        terms = tuple(as_matrix(t).copy() for t in self.terms)
        if not terms:
            raise DimensionError("TermSet needs at least one term")
        _check_same_dim(*terms)
        if terms[0].shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {terms[0].shape[0]} exceeds cap {MAX_DIM}")
        for t in terms:
            t.setflags(write=False)
        kind = NormKind(self.norm_kind)
        norms = tuple(norm(t, kind) for t in terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "norm_kind", kind)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "total", float(sum(norms)))

    @classmethod
    def of(cls, terms: Iterable, norm_kind: NormKind = NormKind.SPECTRAL) -> "TermSet":
        return cls(tuple(terms), norm_kind)

    @property
    def dim(self) -> int:
        return self.terms[0].shape[0]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def matrix_sum(self) -> np.ndarray:
        return _finite(np.sum(self.terms, axis=0), "term sum")

    def scaled(self, factor: float) -> "TermSet":
        return TermSet(tuple(factor * t for t in self.terms), self.norm_kind)

    def with_norm(self, kind: NormKind) -> "TermSet":
        return TermSet(self.terms, kind)


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))
