"""Degree-2 truncated matrix power series.

A :class:`Jet2` ``(c0, c1, c2)`` stands for ``c0 + c1*t + c2*t**2`` where ``t``
plays the role of ``1/n``.  Products discard every term of degree 3 or more
and never approximate the retained ones, so comparing jets checks Taylor
polynomials exactly up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionError, NormKind, TermSet, as_matrix, identity, norm


@dataclass(frozen=True, eq=False)
class Jet2:
    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        c0, c1, c2 = (as_matrix(c) for c in (self.c0, self.c1, self.c2))
        if not c0.shape == c1.shape == c2.shape:
            raise DimensionError("jet coefficients must share one dimension")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @property
    def dim(self) -> int:
        return self.c0.shape[0]

    @property
    def coefficients(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.c0, self.c1, self.c2

    def __add__(self, other: "Jet2") -> "Jet2":
        _same_dim(self, other)
        return Jet2(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def scale(self, factor: complex) -> "Jet2":
        return Jet2(factor * self.c0, factor * self.c1, factor * self.c2)

    def evaluate(self, t: float) -> np.ndarray:
        """The truncated polynomial at ``t``."""
        return self.c0 + self.c1 * t + self.c2 * (t * t)

    def max_deviation(self, other: "Jet2") -> float:
        """Largest entrywise difference over all three coefficients."""
        _same_dim(self, other)
        return max(
            float(np.max(np.abs(x - y), initial=0.0))
            for x, y in zip(self.coefficients, other.coefficients)
        )


def _same_dim(*jets: Jet2) -> None:
    dims = {j.dim for j in jets}
    if len(dims) != 1:
        raise DimensionError(f"jet dimension mismatch: {sorted(dims)}")


def jet_unit(dim: int) -> Jet2:
    zero = np.zeros((dim, dim), dtype=np.complex128)
    return Jet2(identity(dim), zero, zero)


def jet_exp(a) -> Jet2:
    """Degree-2 jet of ``t -> exp(t*a)``: ``(I, a, a**2/2)``."""
    a = as_matrix(a)
    return Jet2(identity(a.shape[0]), a, (a @ a) / 2)


def jet_mul(x: Jet2, y: Jet2) -> Jet2:
    _same_dim(x, y)
    return Jet2(
        x.c0 @ y.c0,
        x.c0 @ y.c1 + x.c1 @ y.c0,
        x.c0 @ y.c2 + x.c1 @ y.c1 + x.c2 @ y.c0,
    )


def jet_jordan(x: Jet2, y: Jet2) -> Jet2:
    """Jordan product ``(xy + yx)/2`` of jets; symmetric bit for bit."""
    xy, yx = jet_mul(x, y), jet_mul(y, x)
    return Jet2((xy.c0 + yx.c0) / 2, (xy.c1 + yx.c1) / 2, (xy.c2 + yx.c2) / 2)


def jet_triple(x: Jet2, y: Jet2, z: Jet2) -> Jet2:
    """Jordan triple product ``(xyz + zyx)/2`` of jets."""
    return (jet_mul(jet_mul(x, y), z) + jet_mul(jet_mul(z, y), x)).scale(0.5)


def jet_of_g_base(terms: TermSet) -> Jet2:
    """Jet of the left-nested Jordan fold of ``exp(t*A_j)``."""
    acc = jet_exp(terms[0])
    for a in terms.terms[1:]:
        acc = jet_jordan(acc, jet_exp(a))
    return acc


def jet_of_h_base(terms: TermSet) -> Jet2:
    """Jet of the nested triple-product base.

    Starts from ``exp(t*A_1)`` and wraps it as
    ``{exp(t*A_2k) . exp(t*A_2k+1)}`` for ``k = 1..p``.
    """
    if len(terms) % 2 == 0:
        raise ValueError(f"h-type base needs an odd number of terms, got {len(terms)}")
    acc = jet_exp(terms[0])
    for k in range(1, len(terms) // 2 + 1):
        acc = jet_triple(jet_exp(terms[2 * k - 1]), acc, jet_exp(terms[2 * k]))
    return acc


def exp_sum_jet(terms: TermSet) -> Jet2:
    """``(I, S, S**2/2)`` with ``S`` the sum of the terms: the expected Taylor polynomial."""
    return jet_exp(terms.matrix_sum())


def jet_identity_deviation(terms: TermSet, base: str = "g") -> tuple[float, float]:
    """Deviation of a base's jet from ``(I, S, S**2/2)`` and the tolerance scale ``1 + ||S||**2``.

    ``base`` is ``"g"`` (Jordan-product fold) or ``"h"`` (triple-product nest).
    """
    if base == "g":
        jet = jet_of_g_base(terms)
    elif base == "h":
        jet = jet_of_h_base(terms)
    else:
        raise ValueError(f"unknown base {base!r}")
    s = terms.matrix_sum()
    scale = 1.0 + norm(s, NormKind.SPECTRAL) ** 2
    return jet.max_deviation(jet_exp(s)), scale
