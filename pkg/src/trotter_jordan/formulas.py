"""Product-formula approximations of ``exp(A_1 + ... + A_m)``.

Each formula builds a single base factor from the exponentials ``exp(A_j/n)``
and raises it to the ``n``-th power:

* ``g``: left-nested Jordan products ``((e_1 ∘ e_2) ∘ ...) ∘ e_m``;
* ``h``: nested triple products ``{e_2p ... {e_2 e_1 e_3} ... e_2p+1}``;
* ``classic``: the ordered product ``e_1 e_2 ... e_m``;
* ``symmetrized``: ``h`` on the substituted family
  ``B_1, B_2/2, B_2/2, ..., B_p/2, B_p/2``, i.e. the symmetric product
  ``e(B_p/2n) ... e(B_1/n) ... e(B_p/2n)``.
"""
from __future__ import annotations

import numpy as np

from .expm import expm, expm_oracle
from .linalg import TermSet, jordan_product, jordan_triple, mat_power

EXACT_TOL = 1e-14


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _check_odd(terms: TermSet) -> None:
    if len(terms) % 2 == 0:
        raise ValueError(f"h-type formulas need an odd number of terms, got {len(terms)}")


def _step_exponentials(terms: TermSet, n: int) -> list[np.ndarray]:
    return [expm(a / n) for a in terms]


def exact_exp_sum(terms: TermSet) -> np.ndarray:
    """Reference value of ``exp(sum A_j)`` from the certified oracle."""
    return expm_oracle(terms.matrix_sum(), EXACT_TOL)


def g_base(terms: TermSet, n: int) -> np.ndarray:
    n = _check_n(n)
    exps = _step_exponentials(terms, n)
    acc = exps[0]
    for e in exps[1:]:
        acc = jordan_product(acc, e)
    return acc


def h_base(terms: TermSet, n: int) -> np.ndarray:
    n = _check_n(n)
    _check_odd(terms)
    exps = _step_exponentials(terms, n)
    acc = exps[0]
    for k in range(1, len(exps) // 2 + 1):
        acc = jordan_triple(exps[2 * k - 1], acc, exps[2 * k])
    return acc


def classic_base(terms: TermSet, n: int) -> np.ndarray:
    n = _check_n(n)
    exps = _step_exponentials(terms, n)
    acc = exps[0]
    for e in exps[1:]:
        acc = acc @ e
    return acc


def g_formula(terms: TermSet, n: int) -> np.ndarray:
    return mat_power(g_base(terms, n), n)


def h_formula(terms: TermSet, n: int) -> np.ndarray:
    return mat_power(h_base(terms, n), n)


def classic_formula(terms: TermSet, n: int) -> np.ndarray:
    return mat_power(classic_base(terms, n), n)


def symmetrized_terms(b_terms: TermSet) -> TermSet:
    """``B_1, B_2/2, B_2/2, ..., B_p/2, B_p/2``."""
    out = [b_terms[0]]
    for b in b_terms.terms[1:]:
        half = b / 2
        out.extend((half, half))
    return TermSet(tuple(out), b_terms.norm_kind)


def symmetrized_formula(b_terms: TermSet, n: int) -> np.ndarray:
    return h_formula(symmetrized_terms(b_terms), n)


def symmetric_product_formula(b_terms: TermSet, n: int) -> np.ndarray:
    """The symmetric ordered product built directly with matrix products.

    Independent construction of :func:`symmetrized_formula`; the two agree
    because ``{e Q e} = e Q e``.
    """
    n = _check_n(n)
    halves = [expm(b / (2 * n)) for b in b_terms.terms[1:]]
    acc = expm(b_terms[0] / n)
    for e in halves:
        acc = e @ acc @ e
    return mat_power(acc, n)


FORMULAS = {
    "g": g_formula,
    "h": h_formula,
    "classic": classic_formula,
    "symmetrized": symmetrized_formula,
}

BASES = {
    "g": g_base,
    "h": h_base,
    "classic": classic_base,
    "symmetrized": lambda terms, n: h_base(symmetrized_terms(terms), n),
}
