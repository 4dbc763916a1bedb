import math

import mpmath
import numpy as np
import pytest

from trotter_jordan.bounds import (
    BoundReport,
    F_matrix,
    scalar_taylor_tail,
    suzuki_bound,
    taylor_remainder_bound,
    telescoping_bound,
)
from trotter_jordan.jets import jet_of_g_base
from trotter_jordan.linalg import NormKind, TermSet, identity

from conftest import random_matrix

mpmath.mp.dps = 40


def mp_suzuki(s, n):
    s = mpmath.mpf(s)
    return s**3 * mpmath.exp(s) / (3 * n * n)


def mp_taylor(s, n):
    s = mpmath.mpf(s)
    return s**3 * mpmath.exp(s / n) / (6 * mpmath.mpf(n) ** 3)


def mp_tail(s, n):
    x = mpmath.mpf(s) / n
    return mpmath.exp(x) - 1 - x - x**2 / 2


@pytest.mark.parametrize(
    "s,n,expected",
    [(0.0, 5, 0.0), (1.0, 10, 9.060939428196817e-3), (2.0, 1, 19.704149597148401)],
)
def test_suzuki_bound_values(s, n, expected):
    assert suzuki_bound(s, n) == pytest.approx(expected, rel=1e-14, abs=0)
    assert suzuki_bound(s, n) == pytest.approx(float(mp_suzuki(s, n)), rel=1e-14, abs=0)


@pytest.mark.parametrize(
    "s,n,expected",
    [(0.0, 3, 0.0), (1.0, 1, 0.45304697140984087), (3.0, 10, 6.074364634092014e-3)],
)
def test_taylor_remainder_values(s, n, expected):
    assert taylor_remainder_bound(s, n) == pytest.approx(expected, rel=1e-14, abs=0)
    assert taylor_remainder_bound(s, n) == pytest.approx(float(mp_taylor(s, n)), rel=1e-14, abs=0)


def test_scalar_tail_values():
    assert scalar_taylor_tail(0.0, 1) == 0.0
    assert scalar_taylor_tail(3.0, 3) == pytest.approx(0.21828182845904524, rel=1e-14)


@pytest.mark.parametrize("s", [1e-12, 1e-7, 1e-4, 1e-3, 0.01, 0.3, 0.49, 0.5, 0.51, 2.0, 10.0])
def test_scalar_tail_accuracy(s):
    assert scalar_taylor_tail(s, 1) == pytest.approx(float(mp_tail(s, 1)), rel=1e-13)


def test_scalar_tail_below_remainder_bound():
    for s in np.linspace(0.0, 10.0, 201):
        for n in range(1, 101):
            assert scalar_taylor_tail(s, n) <= taylor_remainder_bound(s, n)


def test_telescoping_values():
    assert telescoping_bound(1.0, 2.0, 0.0, 5) == 0.0
    assert telescoping_bound(3.0, 4.0, 0.25, 1) == 0.25
    assert telescoping_bound(1.1, 1.1, 0.01, 3) == pytest.approx(0.0363, rel=1e-14)


def test_telescoping_dominates_geometric_sum(rng):
    for _ in range(50):
        c, d, diff = rng.uniform(0, 2, size=3)
        n = int(rng.integers(1, 30))
        geometric = diff * sum(c ** (n - 1 - k) * d**k for k in range(n))
        assert geometric <= telescoping_bound(c, d, diff, n) * (1 + 1e-12)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        suzuki_bound(-1.0, 1)
    with pytest.raises(ValueError):
        taylor_remainder_bound(1.0, 0)
    with pytest.raises(ValueError):
        telescoping_bound(1.0, -1.0, 0.1, 2)


def test_F_matrix_examples(rng):
    z = np.zeros((3, 3))
    np.testing.assert_array_equal(F_matrix(TermSet((z, z)), 4), identity(3))
    n = 7
    np.testing.assert_allclose(F_matrix(TermSet((n * identity(2),)), n), 2.5 * identity(2), rtol=1e-15)


def test_F_matrix_matches_jet(rng):
    for _ in range(50):
        terms = TermSet(tuple(random_matrix(rng, 3, 0.7) for _ in range(3)))
        for n in (1, 3, 50):
            t = 1.0 / n
            np.testing.assert_allclose(
                F_matrix(terms, n), jet_of_g_base(terms).evaluate(t), rtol=0, atol=1e-13
            )


def test_bound_report():
    rep = BoundReport(4, 1.0, 1e-3, suzuki_bound(1.0, 4), NormKind.SPECTRAL)
    assert rep.ratio == pytest.approx(1e-3 / suzuki_bound(1.0, 4))
    assert rep.holds()
    assert not BoundReport(1, 1.0, 2.0, 1.0, NormKind.SPECTRAL).holds()
    assert BoundReport(1, 0.0, 0.0, 0.0, NormKind.FROBENIUS).ratio == 0.0
    assert math.isinf(BoundReport(1, 0.0, 1e-3, 0.0, NormKind.FROBENIUS).ratio)
