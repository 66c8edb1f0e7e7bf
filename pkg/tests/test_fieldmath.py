import random

import numpy as np
import pytest

from ncmatch import fieldmath

P = 2**31 - 1


def _det_exact(mat: list[list[int]], p: int) -> int:
    """Cofactor-free exact determinant over the rationals, then reduced mod p."""
    from fractions import Fraction
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    assert det.denominator == 1
    return int(det) % p


def test_primes_and_primality():
    assert fieldmath.primes_above(10, 4) == [11, 13, 17, 19]
    assert fieldmath.is_prime(P) and not fieldmath.is_prime(P - 2)


def test_determinants_match_exact_arithmetic():
    rng = np.random.default_rng(3)
    mats = rng.integers(-3, 4, size=(40, 5, 5))
    mats[0] = 0
    mats[1, 2] = mats[1, 3]
    got = fieldmath.determinants(mats % P, P)
    want = [_det_exact(m.tolist(), P) for m in mats]
    assert got.tolist() == want


def test_inverse_is_inverse_and_singular_flagged():
    rng = np.random.default_rng(4)
    mats = rng.integers(0, P, size=(30, 6, 6))
    mats[5, :, 1] = 0
    det, inv, singular = fieldmath.det_and_inverse(mats, P)
    assert singular.tolist() == [i == 5 for i in range(30)]
    for b in range(30):
        if singular[b]:
            continue
        prod = (mats[b].astype(object) @ inv[b].astype(object)) % P
        assert (prod == np.eye(6, dtype=object)).all()


def test_subgroup_order_and_generator():
    order, g = fieldmath.subgroup(100, P)
    assert order >= 100 and (P - 1) % order == 0
    assert pow(g, order, P) == 1
    assert all(pow(g, order // q, P) != 1 for q in fieldmath.factorize(order))


@pytest.mark.parametrize("degree", [0, 3, 17, 300])
def test_coefficients_recover_polynomials(degree):
    rng = random.Random(degree)
    order, g = fieldmath.subgroup(degree + 1, P)
    polys = [[rng.randrange(P) for _ in range(degree + 1)] for _ in range(3)]
    polys[1][: degree // 2] = [0] * (degree // 2)
    xs = [pow(g, i, P) for i in range(order)]
    values = np.array([[sum(c * pow(x, k, P) for k, c in enumerate(poly)) % P for x in xs]
                       for poly in polys], dtype=np.int64)
    coeffs = fieldmath.coefficients(values, g, order, P)
    for poly, row in zip(polys, coeffs):
        assert row.tolist() == poly + [0] * (order - len(poly))
    lows = fieldmath.lowest_degrees(values, g, order, P, block=7)
    want = [next((k for k, c in enumerate(poly) if c), -1) for poly in polys]
    assert lows.tolist() == want
    assert fieldmath.lowest_degrees(np.zeros((1, order), dtype=np.int64), g, order, P).tolist() == [-1]


def test_matmul_mod_is_exact():
    rng = np.random.default_rng(5)
    a = rng.integers(0, P, size=(7, 50))
    b = rng.integers(0, P, size=(50, 9))
    want = (a.astype(object) @ b.astype(object)) % P
    assert (fieldmath.matmul_mod(a, b, P) == want).all()
